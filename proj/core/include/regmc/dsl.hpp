#pragma once

#include "regmc/automaton.hpp"
#include "regmc/ctl.hpp"
#include "regmc/error.hpp"
#include "regmc/repr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace regmc
{

// Position in the parsed text. line and column are 1-based; begin and end are
// byte offsets with begin <= end <= text size.
struct SourceSpan
{
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==( const SourceSpan&, const SourceSpan& ) = default;
};

class ParseError : public Error
{
    SourceSpan _span;
    std::string _message;
    std::vector< std::string > _expected;

public:
    ParseError( SourceSpan span, std::string message, std::vector< std::string > expected = {} );

    [[nodiscard]] const SourceSpan& span() const { return _span; }
    [[nodiscard]] const std::string& message() const { return _message; }
    [[nodiscard]] const std::vector< std::string >& expected() const { return _expected; }
};

// Automaton files:
//
//   format 1
//   constants 2
//   registers x1 x2
//   actions alpha/2 beta/1
//   locations l0* l1
//   trans l0 -> l1 on alpha(p1, p2) when p1 != p2 do x1 := p1, x2 := p2
//   trans l0 -> l0 on alpha(p1, p2) when p1 = p2 do -
RegisterAutomaton parse_automaton( std::string_view text );

// Formulas: @loc, x = y, x = c, true, false, !, &, |, -> (right associative),
// EX EF EG AX AF AG and E [ f U g ].
CtlFormula parse_formula( std::string_view text, const RegisterAutomaton& ra );

// `loc | {x1 x2} {x3=0}`; registers not mentioned form unlabelled singletons.
RepConfig parse_repconfig( std::string_view text, const RegisterAutomaton& ra );

std::string serialize( const RegisterAutomaton& ra );
std::string serialize( const CtlFormula& f, const RegisterAutomaton& ra );
std::string serialize( const RepConfig& c, const RegisterAutomaton& ra );

} // namespace regmc
