#include "boseq/schedc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "boseq/dynamics.hpp"

namespace boseq {

namespace {

const double kPi = std::acos(-1.0);

struct Token {
    std::string text;
    int column = 1;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

double parse_decimal(const Token& tok, int line) {
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.text.size() || !std::isfinite(v))
        throw SyntaxError("expected a number, got '" + tok.text + "'", line, tok.column);
    return v;
}

long parse_integer(const Token& tok, int line) {
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + tok.text.size())
        throw SyntaxError("expected an integer, got '" + tok.text + "'", line, tok.column);
    return v;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TimeExpr parse_time_expr(const Token& tok, int line) {
    TimeExpr expr;
    std::string body = tok.text;
    if (body.size() > 2 && body.compare(body.size() - 2, 2, "/N") == 0) {
        expr.over_n = true;
        body.resize(body.size() - 2);
    }
    if (body == "pi") {
        expr.times_pi = true;
        expr.coefficient = 1.0;
    } else if (body.rfind("pi/", 0) == 0) {
        const Token div{body.substr(3), tok.column + 3};
        const long d = parse_integer(div, line);
        if (d <= 0) throw SyntaxError("pi divisor must be positive", line, tok.column);
        expr.times_pi = true;
        expr.coefficient = 1.0 / d;
    } else if (body.size() > 3 && body.compare(body.size() - 3, 3, "*pi") == 0) {
        expr.times_pi = true;
        expr.coefficient = parse_decimal({body.substr(0, body.size() - 3), tok.column}, line);
    } else {
        expr.coefficient = parse_decimal({body, tok.column}, line);
    }
    if (!(expr.coefficient > 0.0) || !std::isfinite(expr.coefficient))
        throw SyntaxError("evolve time must be a positive finite value", line, tok.column);
    return expr;
}

ScheduleFactor parse_factor(const Token& tok, int line, int n_sites) {
    if (tok.text.size() < 2)
        throw SyntaxError("expected a factor like Z1 or I, got '" + tok.text + "'", line,
                          tok.column);
    ScheduleFactor f;
    switch (tok.text[0]) {
        case 'X': f.axis = Axis::X; break;
        case 'Y': f.axis = Axis::Y; break;
        case 'Z': f.axis = Axis::Z; break;
        default:
            throw SyntaxError("factor axis must be X, Y, Z or I, got '" + tok.text + "'", line,
                              tok.column);
    }
    const Token site_tok{tok.text.substr(1), tok.column + 1};
    const long site = parse_integer(site_tok, line);
    if (site < 1 || site > n_sites)
        throw UnknownSiteError("line " + std::to_string(line) + ":" +
                               std::to_string(tok.column) + ": site " + std::to_string(site) +
                               " out of range 1.." + std::to_string(n_sites));
    f.site = static_cast<int>(site);
    return f;
}

int first_site(const ScheduleTerm& term) {
    return term.factors.empty() ? 0 : term.factors.front().site;
}

}  // namespace

double TimeExpr::evaluate(int n_bosons) const {
    double v = coefficient;
    if (times_pi) v *= kPi;
    if (over_n) v /= n_bosons;
    return v;
}

std::string TimeExpr::text() const {
    std::string s = fmt(coefficient);
    if (times_pi) s += "*pi";
    if (over_n) s += "/N";
    return s;
}

Schedule parse_schedule(const std::string& text) {
    Schedule schedule;
    std::vector<ScheduleTerm> block;
    bool have_qubits = false;
    bool have_block = false;

    auto flush_block = [&] {
        if (block.empty()) return;
        Statement st;
        st.kind = Statement::Kind::Block;
        st.terms = std::move(block);
        block.clear();
        schedule.statements.push_back(std::move(st));
        have_block = true;
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::vector<Token> tok = tokenize(raw);
        if (tok.empty()) continue;
        const std::string& kw = tok[0].text;

        if (!have_qubits) {
            if (kw != "qubits")
                throw SyntaxError("schedule must start with 'qubits <INT>'", line_no,
                                  tok[0].column);
            if (tok.size() != 2)
                throw SyntaxError("usage: qubits <INT>", line_no, tok[0].column);
            const long m = parse_integer(tok[1], line_no);
            if (m < 1) throw SyntaxError("qubit count must be >= 1", line_no, tok[1].column);
            schedule.n_sites = static_cast<int>(m);
            have_qubits = true;
            continue;
        }

        if (kw == "qubits")
            throw SyntaxError("duplicate 'qubits' header", line_no, tok[0].column);

        if (kw == "bosons") {
            if (!schedule.statements.empty() || !block.empty())
                throw SyntaxError("'bosons' must precede the first statement", line_no,
                                  tok[0].column);
            if (schedule.n_bosons)
                throw SyntaxError("duplicate 'bosons' header", line_no, tok[0].column);
            if (tok.size() != 2)
                throw SyntaxError("usage: bosons <INT>", line_no, tok[0].column);
            const long n = parse_integer(tok[1], line_no);
            if (n < 1) throw SyntaxError("boson count must be >= 1", line_no, tok[1].column);
            schedule.n_bosons = static_cast<int>(n);
            continue;
        }

        if (kw == "term") {
            if (tok.size() < 3)
                throw SyntaxError("usage: term <COEFF> <FACTOR>+", line_no, tok[0].column);
            ScheduleTerm term;
            term.coeff = parse_decimal(tok[1], line_no);
            for (std::size_t i = 2; i < tok.size(); ++i) {
                if (tok[i].text == "I") continue;
                const ScheduleFactor f = parse_factor(tok[i], line_no, schedule.n_sites);
                for (const ScheduleFactor& prev : term.factors)
                    if (prev.site == f.site)
                        throw DuplicateSiteError("line " + std::to_string(line_no) + ":" +
                                                 std::to_string(tok[i].column) + ": site " +
                                                 std::to_string(f.site) +
                                                 " repeated within a term");
                term.factors.push_back(f);
            }
            block.push_back(std::move(term));
            continue;
        }

        if (kw == "evolve") {
            if (tok.size() != 2)
                throw SyntaxError("usage: evolve <TIMEEXPR>", line_no, tok[0].column);
            flush_block();
            if (!have_block)
                throw SyntaxError("'evolve' needs a preceding Hamiltonian block", line_no,
                                  tok[0].column);
            Statement st;
            st.kind = Statement::Kind::Evolve;
            st.time = parse_time_expr(tok[1], line_no);
            schedule.statements.push_back(std::move(st));
            continue;
        }

        if (kw == "measure") {
            if (tok.size() != 3)
                throw SyntaxError("usage: measure <site> <x|y|z>", line_no, tok[0].column);
            flush_block();
            Statement st;
            st.kind = Statement::Kind::Measure;
            const long site = parse_integer(tok[1], line_no);
            if (site < 1 || site > schedule.n_sites)
                throw UnknownSiteError("line " + std::to_string(line_no) + ":" +
                                       std::to_string(tok[1].column) + ": site " +
                                       std::to_string(site) + " out of range 1.." +
                                       std::to_string(schedule.n_sites));
            st.site = static_cast<int>(site);
            if (tok[2].text.size() != 1)
                throw SyntaxError("measurement basis must be x, y or z", line_no, tok[2].column);
            switch (tok[2].text[0]) {
                case 'x': st.basis = Axis::X; break;
                case 'y': st.basis = Axis::Y; break;
                case 'z': st.basis = Axis::Z; break;
                default:
                    throw SyntaxError("measurement basis must be x, y or z", line_no,
                                      tok[2].column);
            }
            schedule.statements.push_back(std::move(st));
            continue;
        }

        throw SyntaxError("unknown statement '" + kw + "'", line_no, tok[0].column);
    }
    if (!have_qubits) throw SyntaxError("empty schedule; expected 'qubits <INT>'", 1, 1);
    flush_block();
    return schedule;
}

std::string pretty_print(const Schedule& schedule) {
    std::string out = "qubits " + std::to_string(schedule.n_sites) + "\n";
    if (schedule.n_bosons) out += "bosons " + std::to_string(*schedule.n_bosons) + "\n";
    for (const Statement& st : schedule.statements) {
        switch (st.kind) {
            case Statement::Kind::Block: {
                std::vector<ScheduleTerm> terms = st.terms;
                std::stable_sort(terms.begin(), terms.end(),
                                 [](const ScheduleTerm& a, const ScheduleTerm& b) {
                                     return first_site(a) < first_site(b);
                                 });
                for (const ScheduleTerm& term : terms) {
                    out += "term " + fmt(term.coeff);
                    if (term.factors.empty()) {
                        out += " I";
                    } else {
                        for (const ScheduleFactor& f : term.factors)
                            out += std::string(" ") +
                                   static_cast<char>(std::toupper(axis_name(f.axis))) +
                                   std::to_string(f.site);
                    }
                    out += "\n";
                }
                break;
            }
            case Statement::Kind::Evolve:
                out += "evolve " + st.time.text() + "\n";
                break;
            case Statement::Kind::Measure:
                out += "measure " + std::to_string(st.site) + " " +
                       std::string(1, std::tolower(axis_name(st.basis))) + "\n";
                break;
        }
    }
    return out;
}

Schedule compile_to_bosonic(const Schedule& schedule, int n_bosons) {
    if (n_bosons < 1) throw ArgumentError("n_bosons must be >= 1");
    if (schedule.n_bosons)
        throw ArgumentError("schedule already binds a boson number; compile from the abstract form");
    Schedule out = schedule;
    out.n_bosons = n_bosons;
    for (Statement& st : out.statements) {
        if (st.kind == Statement::Kind::Block) {
            for (ScheduleTerm& term : st.terms) {
                if (term.order() > 2)
                    throw OrderError("term of order " + std::to_string(term.order()) +
                                     "; the replacement rule covers orders 0..2 only");
                term.coeff *= std::pow(double(n_bosons), 2 - term.order());
            }
        } else if (st.kind == Statement::Kind::Evolve) {
            if (st.time.over_n)
                throw ArgumentError("evolve time already carries /N; refusing to divide twice");
            st.time.over_n = true;
        }
    }
    return out;
}

std::vector<RealizedStep> realize(const Schedule& schedule) {
    if (!schedule.n_bosons)
        throw ArgumentError("schedule has no boson number bound; compile it first");
    const int n = *schedule.n_bosons;
    const int m = schedule.n_sites;
    Eigen::Index dim = 1;
    for (int s = 0; s < m; ++s) {
        dim *= n + 1;
        check_dim_cap(static_cast<std::size_t>(dim));
    }

    std::vector<RealizedStep> steps;
    Operator current;
    bool have_block = false;
    for (const Statement& st : schedule.statements) {
        if (st.kind == Statement::Kind::Block) {
            std::vector<std::pair<double, Operator>> terms;
            for (const ScheduleTerm& term : st.terms) {
                if (term.factors.empty()) {
                    terms.push_back({term.coeff, identity_operator(dim)});
                } else {
                    std::vector<AxisSite> factors;
                    for (const ScheduleFactor& f : term.factors)
                        factors.push_back({f.axis, f.site});
                    terms.push_back({term.coeff, operator_product(factors, m, n)});
                }
            }
            current = operator_sum(terms);
            have_block = true;
        } else if (st.kind == Statement::Kind::Evolve) {
            if (!have_block) throw ArgumentError("evolve without a Hamiltonian block");
            steps.push_back({current, st.time.evaluate(n)});
        }
    }
    return steps;
}

std::pair<RegisterState, std::vector<MeasureOutcome>> execute_schedule(
    const Schedule& schedule, const RegisterState& initial) {
    if (!schedule.n_bosons)
        throw ArgumentError("schedule has no boson number bound; compile it first");
    if (initial.n_sites != schedule.n_sites || initial.n_bosons != *schedule.n_bosons)
        throw DimensionError("initial state does not match the schedule dimensions");
    RegisterState state = initial;
    for (const RealizedStep& step : realize(schedule))
        state = evolve_unitary(state, step.hamiltonian, step.time);
    std::vector<MeasureOutcome> outcomes;
    for (const Statement& st : schedule.statements) {
        if (st.kind != Statement::Kind::Measure) continue;
        const Operator op = operator_product({{st.basis, st.site}}, schedule.n_sites,
                                             *schedule.n_bosons);
        outcomes.push_back({st.site, st.basis, std::real(expectation(state, op))});
    }
    return {std::move(state), std::move(outcomes)};
}

std::pair<RegisterState, std::vector<MeasureOutcome>> execute_schedule(const Schedule& schedule) {
    if (!schedule.n_bosons)
        throw ArgumentError("schedule has no boson number bound; compile it first");
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<QubitAmplitudes> qubits(schedule.n_sites,
                                        coherent_qubit_state(s, s, *schedule.n_bosons));
    return execute_schedule(schedule, RegisterState::product(qubits));
}

}  // namespace boseq
