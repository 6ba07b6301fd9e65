#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boseq/spin.hpp"
#include "boseq/types.hpp"

namespace boseq {

struct ScheduleFactor {
    Axis axis = Axis::Z;
    int site = 1;  // 1-based

    bool operator==(const ScheduleFactor&) const = default;
};

/// coeff times a product of single-site spin factors; no factors means the
/// identity term.
struct ScheduleTerm {
    double coeff = 0.0;
    std::vector<ScheduleFactor> factors;

    int order() const { return static_cast<int>(factors.size()); }
    bool operator==(const ScheduleTerm&) const = default;
};

/// coefficient [* pi] [/ N]; literal "pi/4" parses as coefficient 0.25.
struct TimeExpr {
    double coefficient = 0.0;
    bool times_pi = false;
    bool over_n = false;

    double evaluate(int n_bosons) const;
    std::string text() const;
    bool operator==(const TimeExpr&) const = default;
};

struct Statement {
    enum class Kind { Block, Evolve, Measure };

    Kind kind = Kind::Block;
    std::vector<ScheduleTerm> terms;  // Block
    TimeExpr time;                    // Evolve
    int site = 0;                     // Measure
    Axis basis = Axis::Z;             // Measure

    bool operator==(const Statement&) const = default;
};

struct Schedule {
    int n_sites = 0;
    std::optional<int> n_bosons;
    std::vector<Statement> statements;

    bool operator==(const Schedule&) const = default;
};

/// Line-oriented grammar, '#' starts a comment:
///   qubits <INT>
///   bosons <INT>          (optional, before the first statement)
///   term <COEFF> <FACTOR>+   FACTOR = X<site> | Y<site> | Z<site> | I
///   evolve <TIMEEXPR>        TIMEEXPR = decimal | pi/<INT> | <decimal>*pi, optional /N
///   measure <site> <x|y|z>
/// Consecutive term lines form one Hamiltonian block. Diagnostics carry
/// line:column.
Schedule parse_schedule(const std::string& text);

/// Normalized form: lowercase keywords, one statement per line, block terms
/// sorted by first site. parse(pretty_print(s)) is structurally s for
/// schedules already in sorted order.
std::string pretty_print(const Schedule& schedule);

/// Qubit schedule -> bosonic schedule: term coefficients gain N^(2-order),
/// every evolve time is divided by N, and the result binds `bosons N`.
/// Rejects terms of order > 2 (OrderError) and schedules already bound or
/// already time-divided (ArgumentError).
Schedule compile_to_bosonic(const Schedule& schedule, int n_bosons);

struct RealizedStep {
    Operator hamiltonian;
    double time = 0.0;
};

/// Materializes each block/evolve pair into an executable (Operator, t) list.
/// Requires bosons bound; measure statements are skipped here.
std::vector<RealizedStep> realize(const Schedule& schedule);

struct MeasureOutcome {
    int site = 0;
    Axis basis = Axis::Z;
    double value = 0.0;  // <S^basis_site>
};

/// Runs the schedule from `initial`, returning the final state and the value
/// of every measure statement (taken on the final state).
std::pair<RegisterState, std::vector<MeasureOutcome>> execute_schedule(
    const Schedule& schedule, const RegisterState& initial);

/// All-plus product initial state.
std::pair<RegisterState, std::vector<MeasureOutcome>> execute_schedule(const Schedule& schedule);

}  // namespace boseq
