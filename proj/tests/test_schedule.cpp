#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "boseq/algolab.hpp"
#include "boseq/schedc.hpp"

using namespace boseq;

namespace {

const double kPi = std::acos(-1.0);

const char* kBal01 =
    "qubits 2\n"
    "term 1.0 Z1 Z2\n"
    "term 1.0 Z2\n"
    "term -1.0 I\n"
    "evolve pi/4\n";

Schedule random_schedule(std::mt19937& rng) {
    std::uniform_int_distribution<int> sites(1, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    Schedule s;
    s.n_sites = sites(rng);
    if (coin(rng)) s.n_bosons = 1 + sites(rng);
    const int n_stmts = 1 + int(rng() % 5);
    bool have_block = false;
    for (int i = 0; i < n_stmts; ++i) {
        const int pick = int(rng() % 3);
        // adjacent blocks would merge on re-parse, so never emit two in a row
        const bool last_is_block =
            !s.statements.empty() && s.statements.back().kind == Statement::Kind::Block;
        if ((pick == 0 && !last_is_block) || !have_block) {
            Statement st;
            st.kind = Statement::Kind::Block;
            const int n_terms = 1 + int(rng() % 3);
            for (int t = 0; t < n_terms; ++t) {
                ScheduleTerm term;
                term.coeff = coeff(rng);
                const int order = int(rng() % 3);
                std::vector<int> avail;
                for (int q = 1; q <= s.n_sites; ++q) avail.push_back(q);
                std::shuffle(avail.begin(), avail.end(), rng);
                for (int f = 0; f < order && f < s.n_sites; ++f)
                    term.factors.push_back(
                        {static_cast<Axis>(rng() % 3), avail[f]});
                std::sort(term.factors.begin(), term.factors.end(),
                          [](const ScheduleFactor& a, const ScheduleFactor& b) {
                              return a.site < b.site;
                          });
                st.terms.push_back(term);
            }
            // keep blocks in the printer's order so the round trip is structural
            std::stable_sort(st.terms.begin(), st.terms.end(),
                             [](const ScheduleTerm& a, const ScheduleTerm& b) {
                                 const int fa = a.factors.empty() ? 0 : a.factors[0].site;
                                 const int fb = b.factors.empty() ? 0 : b.factors[0].site;
                                 return fa < fb;
                             });
            s.statements.push_back(st);
            have_block = true;
        } else if (pick == 1) {
            Statement st;
            st.kind = Statement::Kind::Evolve;
            st.time.coefficient = 0.125 * (1 + int(rng() % 8));
            st.time.times_pi = coin(rng);
            st.time.over_n = coin(rng);
            s.statements.push_back(st);
        } else {
            Statement st;
            st.kind = Statement::Kind::Measure;
            st.site = 1 + int(rng() % s.n_sites);
            st.basis = static_cast<Axis>(rng() % 3);
            s.statements.push_back(st);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("basic parse") {
    const Schedule s = parse_schedule("qubits 2\nterm 1.0 Z1 Z2\nevolve pi/4\n");
    CHECK(s.n_sites == 2);
    CHECK_FALSE(s.n_bosons.has_value());
    REQUIRE(s.statements.size() == 2);
    CHECK(s.statements[0].kind == Statement::Kind::Block);
    REQUIRE(s.statements[0].terms.size() == 1);
    CHECK(s.statements[0].terms[0].coeff == 1.0);
    CHECK(s.statements[0].terms[0].order() == 2);
    CHECK(s.statements[1].kind == Statement::Kind::Evolve);
    CHECK(s.statements[1].time.evaluate(1) == doctest::Approx(kPi / 4));
}

TEST_CASE("time expression forms") {
    CHECK(parse_schedule("qubits 1\nterm 1 Z1\nevolve 0.5\n")
              .statements[1]
              .time.evaluate(1) == doctest::Approx(0.5));
    CHECK(parse_schedule("qubits 1\nterm 1 Z1\nevolve 0.5*pi\n")
              .statements[1]
              .time.evaluate(1) == doctest::Approx(0.5 * kPi));
    const TimeExpr t =
        parse_schedule("qubits 1\nterm 1 Z1\nevolve pi/8/N\n").statements[1].time;
    CHECK(t.over_n);
    CHECK(t.evaluate(4) == doctest::Approx(kPi / 32));
}

TEST_CASE("diagnostics carry locations") {
    try {
        parse_schedule("qubits 2\nterm 1.0 Q1\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 10);
    }
    CHECK_THROWS_AS(parse_schedule("qubits 2\nterm 1.0 Z1 Z1\n"), DuplicateSiteError);
    CHECK_THROWS_AS(parse_schedule("qubits 2\nterm 1.0 Z3\n"), UnknownSiteError);
    CHECK_THROWS_AS(parse_schedule("qubits 2\nmeasure 3 z\n"), UnknownSiteError);
    CHECK_THROWS_AS(parse_schedule("qubits 2\nevolve 1.0\n"), SyntaxError);
    CHECK_THROWS_AS(parse_schedule(""), SyntaxError);
    CHECK_THROWS_AS(parse_schedule("term 1.0 Z1\n"), SyntaxError);
}

TEST_CASE("oracle schedule compiles to the bosonic coefficient list") {
    const Schedule compiled = compile_to_bosonic(parse_schedule(kBal01), 5);
    REQUIRE(compiled.n_bosons == 5);
    const auto& terms = compiled.statements[0].terms;
    REQUIRE(terms.size() == 3);
    CHECK(terms[0].coeff == doctest::Approx(1.0));    // order 2, unchanged
    CHECK(terms[1].coeff == doctest::Approx(5.0));    // order 1, gains N
    CHECK(terms[2].coeff == doctest::Approx(-25.0));  // identity, gains N^2
    CHECK(compiled.statements[1].time.over_n);
    CHECK(compiled.statements[1].time.evaluate(5) == doctest::Approx(kPi / 20));
}

TEST_CASE("compile guards") {
    const Schedule s = parse_schedule(kBal01);
    CHECK_THROWS_AS(compile_to_bosonic(compile_to_bosonic(s, 2), 2), ArgumentError);
    CHECK_THROWS_AS(
        compile_to_bosonic(parse_schedule("qubits 3\nterm 1 X1 Y2 Z3\nevolve 1\n"), 2),
        OrderError);
    CHECK_THROWS_AS(
        compile_to_bosonic(parse_schedule("qubits 1\nterm 1 Z1\nevolve pi/4/N\n"), 2),
        ArgumentError);
}

TEST_CASE("N = 1 compilation only rescales identity terms") {
    const Schedule c = compile_to_bosonic(parse_schedule(kBal01), 1);
    for (const auto& term : c.statements[0].terms)
        CHECK(std::abs(term.coeff) == doctest::Approx(1.0));
    CHECK(c.statements[1].time.evaluate(1) == doctest::Approx(kPi / 4));
}

TEST_CASE("realized oracle matrix matches the built-in oracle") {
    for (int n : {1, 3}) {
        const Schedule compiled = compile_to_bosonic(parse_schedule(kBal01), n);
        const auto steps = realize(compiled);
        REQUIRE(steps.size() == 1);
        const Eigen::MatrixXcd ref = deutsch_oracle(OracleKind::BAL01, n).matrix();
        CHECK((steps[0].hamiltonian.matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(steps[0].time == doctest::Approx(kPi / (4.0 * n)));
    }
    CHECK_THROWS_AS(realize(parse_schedule(kBal01)), ArgumentError);
}

TEST_CASE("executed oracle schedule reproduces the direct experiment") {
    const int n = 2;
    Schedule compiled = compile_to_bosonic(parse_schedule(kBal01), n);
    compiled.statements[1].time = TimeExpr{0.5, true, true};  // pi/2N, deterministic point
    const RegisterState initial = RegisterState::product(
        {coherent_qubit_state(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), n),
         coherent_qubit_state(1.0, 0.0, n)});
    const auto [final_state, outcomes] = execute_schedule(compiled, initial);
    const DeutschResult direct = run_deutsch(OracleKind::BAL01, n);
    CHECK(fidelity(final_state, direct.final_state) >= 1.0 - 1e-12);
}

TEST_CASE("round trip on generated schedules") {
    std::mt19937 rng(314);
    for (int i = 0; i < 100; ++i) {
        const Schedule s = random_schedule(rng);
        const Schedule back = parse_schedule(pretty_print(s));
        CHECK(back == s);
    }
}

TEST_CASE("fuzzed inputs never crash the parser") {
    std::mt19937 rng(2718);
    const std::string seed = std::string(kBal01) + "bosons 3\nmeasure 1 x\nevolve 2.0\n";
    int parsed = 0, rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        std::string mutated = seed;
        const int n_mut = 1 + int(rng() % 6);
        for (int m = 0; m < n_mut; ++m) {
            const std::size_t pos = rng() % mutated.size();
            switch (rng() % 3) {
                case 0: mutated[pos] = char(32 + rng() % 95); break;
                case 1: mutated.erase(pos, 1 + rng() % 3); break;
                default: mutated.insert(pos, 1, char(32 + rng() % 95)); break;
            }
            if (mutated.empty()) mutated = "x";
        }
        try {
            parse_schedule(mutated);
            ++parsed;
        } catch (const Error&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 1000);
    CHECK(rejected > 0);
}
