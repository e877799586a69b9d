#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>

#include "qadapt/dense.hpp"
#include "qadapt/fcidump.hpp"
#include "qadapt/hamiltonian.hpp"

using namespace qadapt;

namespace {

std::string fixture(const std::string& name) {
    return std::string(QADAPT_FIXTURE_DIR) + "/" + name;
}

MolecularIntegrals random_integrals(std::mt19937_64& rng, uint32_t n, uint32_t n_elec) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    MolecularIntegrals m;
    m.n_orbitals = n;
    m.n_electrons = n_elec;
    m.allocate();
    for (uint32_t p = 0; p < n; ++p)
        for (uint32_t q = 0; q <= p; ++q) {
            double v = val(rng);
            m.h_at(p, q) = m.h_at(q, p) = v;
        }
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j <= i; ++j)
            for (uint32_t k = 0; k <= i; ++k) {
                uint32_t lmax = (k == i) ? j : k;
                for (uint32_t l = 0; l <= lmax; ++l) {
                    double v = 0.3 * val(rng);
                    const uint32_t q[8][4] = {
                        {i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                        {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}};
                    for (const auto& t : q) m.g_at(t[0], t[1], t[2], t[3]) = v;
                }
            }
    m.e_core = val(rng);
    return m;
}

double sector_ground_energy(const QubitOperator& op, uint32_t n_particles) {
    return min_eigenvalue_in_sector(op, n_particles);
}

}  // namespace

TEST_CASE("empty core leaves integrals untouched") {
    std::mt19937_64 rng(23);
    auto m = random_integrals(rng, 3, 4);
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(3));
    CHECK(eff.offset == m.e_core);
    CHECK(std::abs(eff.op.scalar_part() - complex{m.e_core, 0}) < 1e-14);
    // one-body coefficient of a^_0a a_1a must equal h_01
    auto it = eff.op.terms().find(LadderProduct{{0, true}, {2, false}});
    REQUIRE(it != eff.op.terms().end());
    CHECK(std::abs(it->second.real() - m.h_at(0, 1)) < 1e-14);
}

TEST_CASE("frozen-core energies match the core-constrained full diagonalization") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 4; ++trial) {
        const uint32_t n = 3;
        const uint32_t n_elec = 4;
        auto m = random_integrals(rng, n, n_elec);

        auto full = build_effective_hamiltonian(m, ActiveSpaceSpec::full(n));
        auto full_q = jordan_wigner(full.op);

        ActiveSpaceSpec space;
        space.core = {0};
        space.active = {1, 2};
        auto eff = build_effective_hamiltonian(m, space);
        CHECK(eff.n_active_electrons == n_elec - 2);
        auto eff_q = jordan_wigner(eff.op);

        // oracle: diagonalize the full Hamiltonian restricted to determinants
        // with the core spatial orbital doubly occupied
        const uint64_t core_mask = 0b11;  // modes 0 (alpha) and 1 (beta)
        double e_oracle = min_eigenvalue_filtered(full_q, [&](uint64_t b) {
            return (b & core_mask) == core_mask &&
                   std::popcount(b) == static_cast<int>(n_elec);
        });
        double e_eff = sector_ground_energy(eff_q, n_elec - 2);
        CHECK(e_eff == Catch::Approx(e_oracle).margin(1e-10));
    }
}

TEST_CASE("negative active electron count is rejected") {
    std::mt19937_64 rng(31);
    auto m = random_integrals(rng, 3, 2);
    ActiveSpaceSpec space;
    space.core = {0, 1};
    space.active = {2};
    CHECK_THROWS_AS(build_effective_hamiltonian(m, space), std::domain_error);
}

TEST_CASE("H2 fixture reproduces the reference energies") {
    auto m = parse_fcidump_file(fixture("h2.fcidump"));
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(m.n_orbitals));
    auto q = jordan_wigner(eff.op);
    // frozen reference values from the fixture generator (independent
    // determinant-basis FCI)
    CHECK(sector_ground_energy(q, 2) == Catch::Approx(-1.1373060358).margin(1e-9));
}

TEST_CASE("H4 fixture reproduces the reference energies") {
    auto m = parse_fcidump_file(fixture("h4_2.0.fcidump"));
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(m.n_orbitals));
    auto q = jordan_wigner(eff.op);
    CHECK(sector_ground_energy(q, 4) == Catch::Approx(-1.8977779224).margin(1e-9));
}

TEST_CASE("benzene 4-in-4 fixture: term counts and energies") {
    auto m = parse_fcidump_file(fixture("benzene_4in4_no.fcidump"));
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(m.n_orbitals));

    CHECK(term_count(eff.op) == 1057);
    auto [compressed, report] = compress(eff.op, 1e-2);
    CHECK(term_count(compressed) == 233);
    CHECK(report.kept == 233);
    CHECK(report.kept + report.dropped == 1057);

    auto q_full = jordan_wigner(eff.op);
    auto q_comp = jordan_wigner(compressed);
    const double e_full = sector_ground_energy(q_full, 4);
    const double e_comp = sector_ground_energy(q_comp, 4);
    // frozen reference values from the fixture generator
    CHECK(e_full == Catch::Approx(-227.9458976385).margin(1e-8));
    CHECK(e_comp == Catch::Approx(-227.9446032066).margin(1e-8));
    CHECK(std::abs(e_comp - e_full) < 1.5e-3);
}

TEST_CASE("benzene frozen-core build matches the pre-folded fixture") {
    auto big = parse_fcidump_file(fixture("benzene_23orb_no.fcidump"));
    ActiveSpaceSpec space;
    for (uint32_t i = 0; i < 19; ++i) space.core.push_back(i);
    space.active = {19, 20, 21, 22};
    auto eff = build_effective_hamiltonian(big, space);
    CHECK(eff.n_active_electrons == 4);
    CHECK(eff.active_orbsym == std::vector<int>{6, 7, 5, 8});

    auto small = parse_fcidump_file(fixture("benzene_4in4_no.fcidump"));
    auto direct = build_effective_hamiltonian(small, ActiveSpaceSpec::full(4));

    // identical term-by-term coefficients (both paths fold the same orbitals)
    CHECK(eff.op.term_count() == direct.op.term_count());
    CHECK(std::abs(eff.offset - direct.offset) < 1e-8);
    double max_diff = 0.0;
    for (const auto& [prod, c] : eff.op.terms()) {
        auto it = direct.op.terms().find(prod);
        REQUIRE(it != direct.op.terms().end());
        max_diff = std::max(max_diff, std::abs(c - it->second));
    }
    CHECK(max_diff < 1e-9);
}

TEST_CASE("compression basics") {
    auto m = parse_fcidump_file(fixture("benzene_4in4_no.fcidump"));
    auto eff = build_effective_hamiltonian(m, ActiveSpaceSpec::full(m.n_orbitals));

    SECTION("threshold zero is the identity") {
        auto [same, rep] = compress(eff.op, 0.0);
        CHECK(term_count(same) == term_count(eff.op));
        CHECK(rep.dropped == 0);
    }
    SECTION("infinite threshold keeps only the scalar") {
        auto [scalar_only, rep] = compress(eff.op, 1e30);
        CHECK(term_count(scalar_only) == 1);
        CHECK(std::abs(scalar_only.scalar_part() - eff.op.scalar_part()) < 1e-14);
    }
    SECTION("term count is monotone in the threshold") {
        size_t prev = term_count(eff.op);
        for (double t : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
            auto [c, rep] = compress(eff.op, t);
            CHECK(term_count(c) <= prev);
            prev = term_count(c);
        }
    }
    SECTION("negative threshold is rejected") {
        CHECK_THROWS_AS(compress(eff.op, -1.0), std::domain_error);
    }
}

TEST_CASE("eigenvalue stability bound under compression") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> coeff(-0.5, 0.5);
    std::uniform_int_distribution<int> letter(0, 3);
    for (int trial = 0; trial < 25; ++trial) {
        const uint32_t n = 2 + trial % 5;  // up to 6 qubits here; acceptance goes to 8
        QubitOperator op(n);
        for (int t = 0; t < 30; ++t) {
            std::vector<Pauli> ls(n);
            for (auto& l : ls) l = static_cast<Pauli>(letter(rng));
            op.add_term(PauliString::from_letters(ls), complex{coeff(rng), 0.0});
        }
        auto [comp, rep] = compress(op, 0.1);
        const double lo_full = min_eigenvalue(op);
        const double lo_comp = min_eigenvalue(comp);
        CHECK(std::abs(lo_full - lo_comp) <= rep.dropped_abs_sum + 1e-10);
    }
}

TEST_CASE("irrep product follows the XOR convention") {
    CHECK(irrep_product(1, 1) == 1);
    CHECK(irrep_product(6, 7) == 4);   // B2g x B3g = B1g in the D2h numbering
    CHECK(irrep_product(5, 8) == 4);
    CHECK_THROWS_AS(irrep_product(0, 1), std::domain_error);
}
