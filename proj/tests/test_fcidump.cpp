#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "qadapt/fcidump.hpp"

using namespace qadapt;

namespace {
const std::string kSmall =
    "&FCI NORB=2,NELEC=2,MS2=0,\n"
    " ORBSYM=1,1,\n"
    " ISYM=1,\n"
    "&END\n"
    "  0.5  1 1 0 0\n"
    "  0.7  1 2 1 2\n"
    " -0.1  0 0 0 0\n";
}

TEST_CASE("header fields and one-electron records") {
    std::istringstream in(kSmall);
    auto m = parse_fcidump(in);
    CHECK(m.n_orbitals == 2);
    CHECK(m.n_electrons == 2);
    CHECK(m.ms2 == 0);
    CHECK(m.isym == 1);
    CHECK(m.orbsym == std::vector<int>{1, 1});
    CHECK(m.h_at(0, 0) == 0.5);
    CHECK(m.h_at(1, 1) == 0.0);
    CHECK(m.e_core == -0.1);
}

TEST_CASE("two-electron records expand to all 8 permutations") {
    std::istringstream in(kSmall);
    auto m = parse_fcidump(in);
    const uint32_t idx[8][4] = {{0, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 0},
                                {0, 1, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 1, 0}};
    for (const auto& q : idx) CHECK(m.g_at(q[0], q[1], q[2], q[3]) == 0.7);
    CHECK(m.g_at(0, 0, 0, 0) == 0.0);
}

TEST_CASE("slash-terminated namelist headers parse") {
    std::istringstream in(
        "&FCI NORB= 1,NELEC= 2,MS2=0,\n"
        " ORBSYM=1,\n ISYM=1,\n /\n"
        " 1.25 1 1 0 0\n");
    auto m = parse_fcidump(in);
    CHECK(m.n_orbitals == 1);
    CHECK(m.h_at(0, 0) == 1.25);
}

TEST_CASE("fortran D exponents are accepted") {
    std::istringstream in(
        "&FCI NORB=1,NELEC=1,MS2=1,ORBSYM=1,ISYM=1,&END\n"
        " -1.5D-01 1 1 0 0\n");
    auto m = parse_fcidump(in);
    CHECK(m.h_at(0, 0) == -0.15);
}

TEST_CASE("parse errors carry line numbers") {
    SECTION("malformed header") {
        std::istringstream in("NOT A HEADER\n");
        CHECK_THROWS_AS(parse_fcidump(in), FcidumpParseError);
    }
    SECTION("index out of range") {
        std::istringstream in("&FCI NORB=2,NELEC=2,MS2=0,&END\n 0.5 3 1 0 0\n");
        try {
            parse_fcidump(in);
            FAIL("expected parse error");
        } catch (const FcidumpParseError& e) {
            CHECK(e.line_number == 2);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SECTION("non-numeric value") {
        std::istringstream in("&FCI NORB=1,NELEC=1,MS2=1,&END\n xyz 1 1 0 0\n");
        CHECK_THROWS_AS(parse_fcidump(in), FcidumpParseError);
    }
    SECTION("orbital-energy style records are rejected") {
        std::istringstream in("&FCI NORB=2,NELEC=2,MS2=0,&END\n 0.5 1 0 0 0\n");
        CHECK_THROWS_AS(parse_fcidump(in), FcidumpParseError);
    }
}

TEST_CASE("parse -> serialize -> parse is a fixed point") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    MolecularIntegrals m;
    m.n_orbitals = 3;
    m.n_electrons = 4;
    m.ms2 = 0;
    m.orbsym = {1, 4, 4};
    m.allocate();
    for (uint32_t p = 0; p < 3; ++p)
        for (uint32_t q = 0; q <= p; ++q) {
            double v = val(rng);
            m.h_at(p, q) = v;
            m.h_at(q, p) = v;
        }
    // random 8-fold-symmetric two-electron tensor
    for (uint32_t i = 0; i < 3; ++i)
        for (uint32_t j = 0; j <= i; ++j)
            for (uint32_t k = 0; k <= i; ++k) {
                uint32_t lmax = (k == i) ? j : k;
                for (uint32_t l = 0; l <= lmax; ++l) {
                    double v = val(rng);
                    const uint32_t q[8][4] = {
                        {i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                        {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}};
                    for (const auto& t : q) m.g_at(t[0], t[1], t[2], t[3]) = v;
                }
            }
    m.e_core = val(rng);

    auto text1 = fcidump_to_string(m);
    std::istringstream in1(text1);
    auto m2 = parse_fcidump(in1);
    auto text2 = fcidump_to_string(m2);
    CHECK(text1 == text2);
    CHECK(m2.h == m.h);
    CHECK(m2.g == m.g);
    CHECK(m2.e_core == m.e_core);
    CHECK(m2.orbsym == m.orbsym);
}

TEST_CASE("fixture files parse") {
    auto h2 = parse_fcidump_file(std::string(QADAPT_FIXTURE_DIR) + "/h2.fcidump");
    CHECK(h2.n_orbitals == 2);
    CHECK(h2.n_electrons == 2);

    auto benzene = parse_fcidump_file(std::string(QADAPT_FIXTURE_DIR) +
                                      "/benzene_4in4_no.fcidump");
    CHECK(benzene.n_orbitals == 4);
    CHECK(benzene.n_electrons == 4);
    CHECK(benzene.orbsym == std::vector<int>{6, 7, 5, 8});

    auto big = parse_fcidump_file(std::string(QADAPT_FIXTURE_DIR) +
                                  "/benzene_23orb_no.fcidump");
    CHECK(big.n_orbitals == 23);
    CHECK(big.n_electrons == 42);
}
