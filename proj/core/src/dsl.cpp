#include "regmc/dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>

namespace regmc
{

ParseError::ParseError( SourceSpan span, std::string message, std::vector< std::string > expected )
        : Error( std::to_string( span.line ) + ":" + std::to_string( span.column ) + ": " + message ),
          _span{ span },
          _message{ std::move( message ) },
          _expected{ std::move( expected ) }
{
}

namespace
{

struct Token
{
    enum class Kind : std::uint8_t
    {
        ident,
        number,
        punct,
        newline,
        end
    };

    Kind kind = Kind::end;
    std::string text;
    SourceSpan span;
};

bool is_ident_start( char ch ) { return ( ch >= 'a' && ch <= 'z' ) || ( ch >= 'A' && ch <= 'Z' ) || ch == '_'; }
bool is_digit( char ch ) { return ch >= '0' && ch <= '9'; }
bool is_ident_char( char ch ) { return is_ident_start( ch ) || is_digit( ch ); }

std::vector< Token > tokenize( std::string_view text, bool keep_newlines )
{
    std::vector< Token > out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    while ( i < text.size() )
    {
        const char ch = text[ i ];
        if ( ch == '\n' )
        {
            if ( keep_newlines )
                out.push_back( { Token::Kind::newline, "\n", { line, col, i, i + 1 } } );
            ++i;
            ++line;
            col = 1;
            continue;
        }
        if ( ch == ' ' || ch == '\t' || ch == '\r' )
        {
            ++i;
            ++col;
            continue;
        }
        if ( ch == '#' )
        {
            while ( i < text.size() && text[ i ] != '\n' )
            {
                ++i;
                ++col;
            }
            continue;
        }

        std::size_t len = 0;
        Token::Kind kind = Token::Kind::punct;
        if ( is_ident_start( ch ) )
        {
            kind = Token::Kind::ident;
            while ( i + len < text.size() && is_ident_char( text[ i + len ] ) )
                ++len;
        }
        else if ( is_digit( ch ) )
        {
            kind = Token::Kind::number;
            while ( i + len < text.size() && is_digit( text[ i + len ] ) )
                ++len;
        }
        else
        {
            const std::string_view rest = text.substr( i );
            if ( rest.starts_with( "->" ) || rest.starts_with( ":=" ) || rest.starts_with( "!=" ) )
                len = 2;
            else if ( std::string_view( "=,(){}|&!@[]*/-" ).find( ch ) != std::string_view::npos )
                len = 1;
            else
                throw ParseError( { line, col, i, i + 1 }, "unexpected character" );
        }
        out.push_back( { kind, std::string( text.substr( i, len ) ), { line, col, i, i + len } } );
        i += len;
        col += len;
    }
    out.push_back( { Token::Kind::end, "", { line, col, text.size(), text.size() } } );
    return out;
}

const std::set< std::string, std::less<> > reserved_words = {
    "format", "constants", "registers", "actions", "locations", "trans", "on", "when", "do",
    "true",   "false",     "E",         "U",       "EX",        "EF",    "EG", "AX",   "AF", "AG" };

class Cursor
{
    std::vector< Token > _tokens;
    std::size_t _pos = 0;

public:
    explicit Cursor( std::vector< Token > tokens ) : _tokens{ std::move( tokens ) } {}

    [[nodiscard]] const Token& peek( std::size_t ahead = 0 ) const
    {
        return _tokens[ std::min( _pos + ahead, _tokens.size() - 1 ) ];
    }
    const Token& next()
    {
        const Token& t = _tokens[ _pos ];
        if ( _pos + 1 < _tokens.size() )
            ++_pos;
        return t;
    }

    [[nodiscard]] bool at( Token::Kind kind ) const { return peek().kind == kind; }
    [[nodiscard]] bool at_punct( std::string_view p ) const
    {
        return peek().kind == Token::Kind::punct && peek().text == p;
    }
    [[nodiscard]] bool at_word( std::string_view w ) const
    {
        return peek().kind == Token::Kind::ident && peek().text == w;
    }
    [[nodiscard]] bool at_line_end() const { return at( Token::Kind::newline ) || at( Token::Kind::end ); }

    bool accept_punct( std::string_view p )
    {
        if ( !at_punct( p ) )
            return false;
        next();
        return true;
    }

    [[noreturn]] void fail( const Token& t, const std::string& message, std::vector< std::string > expected = {} ) const
    {
        throw ParseError( t.span, message, std::move( expected ) );
    }

    [[noreturn]] void unexpected( std::vector< std::string > expected ) const
    {
        const Token& t = peek();
        std::string found = t.kind == Token::Kind::end       ? "end of input"
                            : t.kind == Token::Kind::newline ? "end of line"
                                                             : "'" + t.text + "'";
        std::string message = "unexpected " + found + ", expected ";
        for ( std::size_t i = 0; i < expected.size(); ++i )
            message += ( i > 0 ? " or " : "" ) + expected[ i ];
        fail( t, message, std::move( expected ) );
    }

    const Token& expect_punct( std::string_view p )
    {
        if ( !at_punct( p ) )
            unexpected( { "'" + std::string( p ) + "'" } );
        return next();
    }
    const Token& expect_word( std::string_view w )
    {
        if ( !at_word( w ) )
            unexpected( { "'" + std::string( w ) + "'" } );
        return next();
    }
    const Token& expect_ident( const std::string& what )
    {
        if ( !at( Token::Kind::ident ) )
            unexpected( { what } );
        return next();
    }
    const Token& expect_name( const std::string& what )
    {
        const Token& t = expect_ident( what );
        if ( reserved_words.contains( t.text ) )
            fail( t, "'" + t.text + "' is a reserved word" );
        return t;
    }
    std::uint64_t expect_number( const std::string& what, std::uint64_t max = 0xffffffffu )
    {
        if ( !at( Token::Kind::number ) )
            unexpected( { what } );
        const Token& t = next();
        std::uint64_t value = 0;
        auto [ ptr, ec ] = std::from_chars( t.text.data(), t.text.data() + t.text.size(), value );
        if ( ec != std::errc{} || ptr != t.text.data() + t.text.size() || value > max )
            fail( t, "number out of range" );
        return value;
    }
    void expect_line_end()
    {
        if ( !at_line_end() )
            unexpected( { "end of line" } );
        if ( at( Token::Kind::newline ) )
            next();
    }
    void expect_end()
    {
        if ( !at( Token::Kind::end ) )
            unexpected( { "end of input" } );
    }
};

std::size_t index_in( const std::vector< std::string >& names, const std::string& name )
{
    auto it = std::find( names.begin(), names.end(), name );
    return it == names.end() ? RegisterAutomaton::npos : static_cast< std::size_t >( it - names.begin() );
}

// Parameter names produced by the serializer: p1, p2, ... unless a register
// already looks like that, in which case the prefix is lengthened.
std::string param_prefix( const std::vector< std::string >& registers )
{
    std::string prefix = "p";
    auto clashes = [ & ]( const std::string& pre ) {
        return std::any_of( registers.begin(), registers.end(), [ & ]( const std::string& r ) {
            return r.size() > pre.size() && r.starts_with( pre )
                   && std::all_of( r.begin() + static_cast< std::ptrdiff_t >( pre.size() ), r.end(), is_digit );
        } );
    };
    while ( clashes( prefix ) )
        prefix += "p";
    return prefix;
}

class AutomatonParser
{
    Cursor _cur;
    std::optional< ConstantSet > _constants;
    std::vector< std::string > _registers;
    std::vector< Action > _actions;
    std::vector< std::string > _locations;
    std::optional< LocationId > _initial;
    std::vector< Transition > _transitions;
    bool _have_registers = false;
    bool _have_actions = false;
    bool _have_locations = false;

    void skip_blank_lines()
    {
        while ( _cur.at( Token::Kind::newline ) )
            _cur.next();
    }

    void parse_constants( const Token& keyword )
    {
        if ( _constants )
            _cur.fail( keyword, "constants declared twice" );
        std::vector< Symbol > symbols;
        while ( !_cur.at_line_end() )
        {
            const Token& t = _cur.peek();
            const auto c = static_cast< Symbol >( _cur.expect_number( "a constant" ) );
            if ( std::find( symbols.begin(), symbols.end(), c ) != symbols.end() )
                _cur.fail( t, "duplicate constant " + t.text );
            symbols.push_back( c );
        }
        _constants = ConstantSet( std::move( symbols ) );
    }

    void parse_registers( const Token& keyword )
    {
        if ( _have_registers )
            _cur.fail( keyword, "registers declared twice" );
        _have_registers = true;
        while ( !_cur.at_line_end() )
        {
            const Token& t = _cur.expect_name( "a register name" );
            if ( index_in( _registers, t.text ) != RegisterAutomaton::npos )
                _cur.fail( t, "duplicate register " + t.text );
            _registers.push_back( t.text );
        }
        if ( _registers.empty() )
            _cur.fail( keyword, "at least one register is required", { "a register name" } );
    }

    void parse_actions( const Token& keyword )
    {
        if ( _have_actions )
            _cur.fail( keyword, "actions declared twice" );
        _have_actions = true;
        while ( !_cur.at_line_end() )
        {
            const Token& t = _cur.expect_name( "an action name" );
            for ( const auto& a : _actions )
                if ( a.name == t.text )
                    _cur.fail( t, "duplicate action " + t.text );
            _cur.expect_punct( "/" );
            const auto arity = static_cast< std::size_t >( _cur.expect_number( "an arity", 1024 ) );
            _actions.push_back( { t.text, arity } );
        }
    }

    void parse_locations( const Token& keyword )
    {
        if ( _have_locations )
            _cur.fail( keyword, "locations declared twice" );
        _have_locations = true;
        while ( !_cur.at_line_end() )
        {
            const Token& t = _cur.expect_name( "a location name" );
            if ( index_in( _locations, t.text ) != RegisterAutomaton::npos )
                _cur.fail( t, "duplicate location " + t.text );
            if ( _cur.at_punct( "*" ) )
            {
                const Token& star = _cur.next();
                if ( _initial )
                    _cur.fail( star, "only one location may be marked initial" );
                _initial = _locations.size();
            }
            _locations.push_back( t.text );
        }
        if ( _locations.empty() )
            _cur.fail( keyword, "at least one location is required", { "a location name" } );
        if ( !_initial )
            _cur.fail( keyword, "no initial location; mark one with '*'" );
    }

    LocationId location( const Token& t ) const
    {
        const std::size_t l = index_in( _locations, t.text );
        if ( l == RegisterAutomaton::npos )
            _cur.fail( t, "unknown location " + t.text );
        return l;
    }

    Term term( const std::vector< std::string >& params, const Action& action )
    {
        const Token& t = _cur.peek();
        if ( t.kind == Token::Kind::number )
        {
            const auto c = static_cast< Symbol >( _cur.expect_number( "a constant" ) );
            if ( !_constants->contains( c ) )
                _cur.fail( t, t.text + " is not a declared constant" );
            return Term::constant( c );
        }
        if ( t.kind != Token::Kind::ident )
            _cur.unexpected( { "a register", "a parameter", "a constant" } );
        _cur.next();
        if ( std::size_t p = index_in( params, t.text ); p != RegisterAutomaton::npos )
            return Term::param( p + 1 );
        if ( std::size_t r = index_in( _registers, t.text ); r != RegisterAutomaton::npos )
            return Term::reg( r );
        const std::string prefix = param_prefix( _registers );
        if ( t.text.size() > prefix.size() && t.text.starts_with( prefix )
             && std::all_of( t.text.begin() + static_cast< std::ptrdiff_t >( prefix.size() ), t.text.end(), is_digit ) )
            _cur.fail( t, "parameter " + t.text + " exceeds the arity " + std::to_string( action.arity ) + " of action "
                                  + action.name );
        _cur.fail( t, "unknown register or parameter " + t.text );
    }

    void parse_transition( const Token& keyword )
    {
        if ( !_have_registers || !_have_locations || !_have_actions )
            _cur.fail( keyword, "registers, actions and locations must be declared before transitions" );
        Transition tr;
        tr.source = location( _cur.expect_ident( "a location" ) );
        _cur.expect_punct( "->" );
        tr.target = location( _cur.expect_ident( "a location" ) );
        _cur.expect_word( "on" );

        const Token& action_token = _cur.expect_ident( "an action" );
        auto it = std::find_if( _actions.begin(), _actions.end(),
                                [ & ]( const Action& a ) { return a.name == action_token.text; } );
        if ( it == _actions.end() )
            _cur.fail( action_token, "unknown action " + action_token.text );
        tr.action = static_cast< ActionId >( it - _actions.begin() );
        const Action& action = *it;

        std::vector< std::string > params;
        if ( _cur.accept_punct( "(" ) )
        {
            if ( !_cur.at_punct( ")" ) )
            {
                do
                {
                    const Token& p = _cur.expect_name( "a parameter name" );
                    if ( index_in( params, p.text ) != RegisterAutomaton::npos )
                        _cur.fail( p, "duplicate parameter " + p.text );
                    if ( index_in( _registers, p.text ) != RegisterAutomaton::npos )
                        _cur.fail( p, "parameter " + p.text + " shadows a register" );
                    params.push_back( p.text );
                } while ( _cur.accept_punct( "," ) );
            }
            _cur.expect_punct( ")" );
        }
        if ( params.size() != action.arity )
            _cur.fail( action_token, "action " + action.name + " has arity " + std::to_string( action.arity ) + ", got "
                                             + std::to_string( params.size() ) + " parameters" );

        _cur.expect_word( "when" );
        if ( _cur.at_word( "true" ) )
            _cur.next();
        else
        {
            do
            {
                GuardAtom atom;
                atom.lhs = term( params, action );
                if ( _cur.accept_punct( "=" ) )
                    atom.polarity = Polarity::eq;
                else if ( _cur.accept_punct( "!=" ) )
                    atom.polarity = Polarity::neq;
                else
                    _cur.unexpected( { "'='", "'!='" } );
                atom.rhs = term( params, action );
                tr.guard.atoms.push_back( atom );
            } while ( _cur.accept_punct( "&" ) );
        }

        _cur.expect_word( "do" );
        if ( !_cur.accept_punct( "-" ) )
        {
            std::vector< bool > bound( _registers.size(), false );
            do
            {
                const Token& target = _cur.expect_ident( "a register" );
                const std::size_t r = index_in( _registers, target.text );
                if ( r == RegisterAutomaton::npos )
                    _cur.fail( target, "unknown register " + target.text );
                if ( bound[ r ] )
                    _cur.fail( target, "register " + target.text + " assigned twice" );
                bound[ r ] = true;
                _cur.expect_punct( ":=" );
                tr.assignment.bindings.emplace_back( r, term( params, action ) );
            } while ( _cur.accept_punct( "," ) );
        }
        _transitions.push_back( std::move( tr ) );
    }

public:
    explicit AutomatonParser( std::string_view text ) : _cur{ tokenize( text, true ) } {}

    RegisterAutomaton parse()
    {
        skip_blank_lines();
        const Token& header = _cur.peek();
        if ( !_cur.at_word( "format" ) )
            _cur.unexpected( { "'format 1'" } );
        _cur.next();
        const Token& version = _cur.peek();
        if ( _cur.expect_number( "a format version" ) != 1 )
            _cur.fail( version, "unsupported format version " + version.text );
        _cur.expect_line_end();

        for ( ;; )
        {
            skip_blank_lines();
            if ( _cur.at( Token::Kind::end ) )
                break;
            const Token& keyword = _cur.peek();
            if ( _cur.at_word( "constants" ) )
                parse_constants( _cur.next() );
            else if ( _cur.at_word( "registers" ) )
                parse_registers( _cur.next() );
            else if ( _cur.at_word( "actions" ) )
                parse_actions( _cur.next() );
            else if ( _cur.at_word( "locations" ) )
                parse_locations( _cur.next() );
            else if ( _cur.at_word( "trans" ) )
            {
                if ( !_constants )
                    _constants = ConstantSet{};
                parse_transition( _cur.next() );
            }
            else
                _cur.unexpected( { "'constants'", "'registers'", "'actions'", "'locations'", "'trans'" } );
            (void)keyword;
            _cur.expect_line_end();
        }

        if ( !_have_registers )
            _cur.fail( header, "missing registers declaration" );
        if ( !_have_locations )
            _cur.fail( header, "missing locations declaration" );
        try
        {
            return RegisterAutomaton( _actions, _registers, _locations, *_initial, _transitions,
                                      _constants.value_or( ConstantSet{} ) );
        }
        catch ( const MalformedError& e )
        {
            _cur.fail( header, e.what() );
        }
    }
};

class FormulaParser
{
    Cursor _cur;
    const RegisterAutomaton& _ra;

    struct Operand
    {
        bool is_constant = false;
        std::size_t value = 0;
        Token token;
    };

    Operand operand()
    {
        const Token& t = _cur.peek();
        if ( t.kind == Token::Kind::number )
        {
            const auto c = static_cast< Symbol >( _cur.expect_number( "a constant" ) );
            if ( !_ra.constants().contains( c ) )
                _cur.fail( t, t.text + " is not a constant of the automaton" );
            return { true, c, t };
        }
        if ( t.kind != Token::Kind::ident )
            _cur.unexpected( { "a formula" } );
        _cur.next();
        const std::size_t r = _ra.find_register( t.text );
        if ( r == RegisterAutomaton::npos )
        {
            if ( _ra.find_location( t.text ) != RegisterAutomaton::npos )
                _cur.fail( t, "unknown register " + t.text + "; write @" + t.text + " for a location" );
            _cur.fail( t, "unknown register " + t.text );
        }
        return { false, r, t };
    }

    CtlFormula primary()
    {
        if ( _cur.accept_punct( "(" ) )
        {
            CtlFormula f = implication();
            _cur.expect_punct( ")" );
            return f;
        }
        if ( _cur.accept_punct( "@" ) )
        {
            const Token& t = _cur.expect_ident( "a location" );
            const std::size_t l = _ra.find_location( t.text );
            if ( l == RegisterAutomaton::npos )
                _cur.fail( t, "unknown location " + t.text );
            return CtlFormula::at_location( l );
        }
        if ( _cur.at_word( "true" ) )
        {
            _cur.next();
            return CtlFormula::verum();
        }
        if ( _cur.at_word( "false" ) )
        {
            _cur.next();
            return CtlFormula::falsum();
        }
        if ( _cur.at_word( "E" ) )
        {
            _cur.next();
            _cur.expect_punct( "[" );
            CtlFormula lhs = implication();
            _cur.expect_word( "U" );
            CtlFormula rhs = implication();
            _cur.expect_punct( "]" );
            return CtlFormula::eu( std::move( lhs ), std::move( rhs ) );
        }
        if ( !_cur.at( Token::Kind::ident ) && !_cur.at( Token::Kind::number ) )
            _cur.unexpected( { "'('", "'@'", "'!'", "'true'", "'false'", "'E ['", "a temporal operator", "a register",
                               "a constant" } );
        const Operand lhs = operand();
        if ( _cur.at_punct( "!=" ) )
            _cur.fail( _cur.peek(), "'!=' is not allowed in formulas; write !(a = b)" );
        _cur.expect_punct( "=" );
        const Operand rhs = operand();
        if ( lhs.is_constant && rhs.is_constant )
            _cur.fail( rhs.token, "an atom must mention at least one register" );
        if ( lhs.is_constant )
            return CtlFormula::reg_eq_const( rhs.value, static_cast< Symbol >( lhs.value ) );
        if ( rhs.is_constant )
            return CtlFormula::reg_eq_const( lhs.value, static_cast< Symbol >( rhs.value ) );
        return CtlFormula::reg_eq( lhs.value, rhs.value );
    }

    CtlFormula unary()
    {
        if ( _cur.accept_punct( "!" ) )
            return CtlFormula::negation( unary() );
        static const std::array< std::pair< std::string_view, CtlFormula ( * )( CtlFormula ) >, 6 > ops = { {
            { "EX", &CtlFormula::ex },
            { "EF", &CtlFormula::ef },
            { "EG", &CtlFormula::eg },
            { "AX", &CtlFormula::ax },
            { "AF", &CtlFormula::af },
            { "AG", &CtlFormula::ag },
        } };
        for ( const auto& [ word, make ] : ops )
            if ( _cur.at_word( word ) )
            {
                _cur.next();
                return make( unary() );
            }
        return primary();
    }

    CtlFormula conjunction()
    {
        CtlFormula f = unary();
        while ( _cur.accept_punct( "&" ) )
            f = CtlFormula::conjunction( std::move( f ), unary() );
        return f;
    }

    CtlFormula disjunction()
    {
        CtlFormula f = conjunction();
        while ( _cur.accept_punct( "|" ) )
            f = CtlFormula::disjunction( std::move( f ), conjunction() );
        return f;
    }

    CtlFormula implication()
    {
        CtlFormula f = disjunction();
        if ( _cur.accept_punct( "->" ) )
            return CtlFormula::implication( std::move( f ), implication() );
        return f;
    }

public:
    FormulaParser( std::string_view text, const RegisterAutomaton& ra ) : _cur{ tokenize( text, false ) }, _ra{ ra } {}

    CtlFormula parse()
    {
        CtlFormula f = implication();
        _cur.expect_end();
        return f;
    }
};

std::string term_text( const Term& t, const RegisterAutomaton& ra, const std::string& prefix )
{
    switch ( t.kind )
    {
    case Term::Kind::reg:
        return ra.registers()[ t.index ];
    case Term::Kind::param:
        return prefix + std::to_string( t.index );
    case Term::Kind::constant:
        break;
    }
    return std::to_string( t.symbol );
}

void write_formula( std::ostream& out, const CtlFormula& f, const RegisterAutomaton& ra );

void write_operand( std::ostream& out, const CtlFormula& f, const RegisterAutomaton& ra )
{
    const bool atom = f.kind() == CtlFormula::Kind::reg_eq || f.kind() == CtlFormula::Kind::reg_eq_const;
    if ( atom )
        out << '(';
    write_formula( out, f, ra );
    if ( atom )
        out << ')';
}

void write_formula( std::ostream& out, const CtlFormula& f, const RegisterAutomaton& ra )
{
    const auto& ops = f.operands();
    switch ( f.kind() )
    {
    case CtlFormula::Kind::at_location:
        out << '@' << ra.locations().at( f.location() );
        break;
    case CtlFormula::Kind::reg_eq:
        out << ra.registers().at( f.lhs_register() ) << " = " << ra.registers().at( f.rhs_register() );
        break;
    case CtlFormula::Kind::reg_eq_const:
        out << ra.registers().at( f.lhs_register() ) << " = " << f.constant();
        break;
    case CtlFormula::Kind::negation:
        out << '!';
        write_operand( out, ops[ 0 ], ra );
        break;
    case CtlFormula::Kind::conjunction:
        out << '(';
        write_formula( out, ops[ 0 ], ra );
        out << " & ";
        write_formula( out, ops[ 1 ], ra );
        out << ')';
        break;
    case CtlFormula::Kind::ex:
        out << "EX ";
        write_operand( out, ops[ 0 ], ra );
        break;
    case CtlFormula::Kind::eg:
        out << "EG ";
        write_operand( out, ops[ 0 ], ra );
        break;
    case CtlFormula::Kind::eu:
        out << "E [ ";
        write_formula( out, ops[ 0 ], ra );
        out << " U ";
        write_formula( out, ops[ 1 ], ra );
        out << " ]";
        break;
    }
}

} // namespace

RegisterAutomaton parse_automaton( std::string_view text ) { return AutomatonParser( text ).parse(); }

CtlFormula parse_formula( std::string_view text, const RegisterAutomaton& ra )
{
    return FormulaParser( text, ra ).parse();
}

RepConfig parse_repconfig( std::string_view text, const RegisterAutomaton& ra )
{
    Cursor cur( tokenize( text, false ) );
    const Token& loc = cur.expect_ident( "a location" );
    const std::size_t l = ra.find_location( loc.text );
    if ( l == RegisterAutomaton::npos )
        cur.fail( loc, "unknown location " + loc.text );
    cur.expect_punct( "|" );

    const std::size_t n = ra.register_count();
    std::vector< bool > seen( n, false );
    std::set< Symbol > used_constants;
    RegisterClasses classes;
    while ( !cur.at( Token::Kind::end ) )
    {
        if ( !cur.at_punct( "{" ) )
            cur.unexpected( { "'{'", "end of input" } );
        const Token& open = cur.next();
        std::vector< RegisterIndex > block;
        std::optional< Symbol > label;
        while ( cur.at( Token::Kind::ident ) )
        {
            const Token& t = cur.next();
            const std::size_t r = ra.find_register( t.text );
            if ( r == RegisterAutomaton::npos )
                cur.fail( t, "unknown register " + t.text );
            if ( seen[ r ] )
                cur.fail( t, "register " + t.text + " appears in two classes" );
            seen[ r ] = true;
            block.push_back( r );
        }
        if ( block.empty() )
            cur.fail( open, "empty class", { "a register" } );
        if ( cur.accept_punct( "=" ) )
        {
            const Token& t = cur.peek();
            const auto c = static_cast< Symbol >( cur.expect_number( "a constant" ) );
            if ( !ra.constants().contains( c ) )
                cur.fail( t, t.text + " is not a constant of the automaton" );
            if ( !used_constants.insert( c ).second )
                cur.fail( t, "constant " + t.text + " labels two classes" );
            if ( cur.at_punct( "=" ) )
                cur.fail( cur.peek(), "a class can equal at most one constant" );
            label = c;
        }
        cur.expect_punct( "}" );
        std::sort( block.begin(), block.end() );
        classes.blocks.push_back( std::move( block ) );
        classes.labels.push_back( label );
    }
    for ( RegisterIndex r = 0; r < n; ++r )
        if ( !seen[ r ] )
        {
            classes.blocks.push_back( { r } );
            classes.labels.emplace_back();
        }
    return { l, matrix_of_classes( n, classes ) };
}

std::string serialize( const RegisterAutomaton& ra )
{
    std::ostringstream out;
    out << "format 1\n";
    out << "constants";
    for ( Symbol c : ra.constants() )
        out << ' ' << c;
    out << "\nregisters";
    for ( const auto& r : ra.registers() )
        out << ' ' << r;
    out << "\nactions";
    for ( const auto& a : ra.actions() )
        out << ' ' << a.name << '/' << a.arity;
    out << "\nlocations";
    for ( std::size_t l = 0; l < ra.location_count(); ++l )
        out << ' ' << ra.locations()[ l ] << ( l == ra.initial() ? "*" : "" );
    out << '\n';

    const std::string prefix = param_prefix( ra.registers() );
    for ( const auto& tr : ra.transitions() )
    {
        const Action& a = ra.actions()[ tr.action ];
        out << "trans " << ra.locations()[ tr.source ] << " -> " << ra.locations()[ tr.target ] << " on " << a.name
            << '(';
        for ( std::size_t p = 1; p <= a.arity; ++p )
            out << ( p > 1 ? ", " : "" ) << prefix << p;
        out << ") when ";
        if ( tr.guard.atoms.empty() )
            out << "true";
        for ( std::size_t i = 0; i < tr.guard.atoms.size(); ++i )
        {
            const auto& atom = tr.guard.atoms[ i ];
            out << ( i > 0 ? " & " : "" ) << term_text( atom.lhs, ra, prefix )
                << ( atom.polarity == Polarity::eq ? " = " : " != " ) << term_text( atom.rhs, ra, prefix );
        }
        out << " do ";
        if ( tr.assignment.bindings.empty() )
            out << '-';
        for ( std::size_t i = 0; i < tr.assignment.bindings.size(); ++i )
        {
            const auto& [ r, t ] = tr.assignment.bindings[ i ];
            out << ( i > 0 ? ", " : "" ) << ra.registers()[ r ] << " := " << term_text( t, ra, prefix );
        }
        out << '\n';
    }
    return out.str();
}

std::string serialize( const CtlFormula& f, const RegisterAutomaton& ra )
{
    std::ostringstream out;
    write_formula( out, f, ra );
    return out.str();
}

std::string serialize( const RepConfig& c, const RegisterAutomaton& ra )
{
    return ra.locations().at( c.location ) + " | " + to_class_notation( c.matrix, ra.registers() );
}

} // namespace regmc
