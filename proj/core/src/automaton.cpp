#include "regmc/automaton.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

namespace regmc
{

ConstantSet::ConstantSet( std::initializer_list< Symbol > symbols )
        : ConstantSet( std::vector< Symbol >( symbols ) )
{
}

ConstantSet::ConstantSet( std::vector< Symbol > symbols ) : _symbols{ std::move( symbols ) }
{
    std::sort( _symbols.begin(), _symbols.end() );
    if ( std::adjacent_find( _symbols.begin(), _symbols.end() ) != _symbols.end() )
        throw MalformedError( "duplicate constant" );
}

bool ConstantSet::contains( Symbol s ) const
{
    return std::binary_search( _symbols.begin(), _symbols.end(), s );
}

std::size_t ConstantSet::index_of( Symbol s ) const
{
    auto it = std::lower_bound( _symbols.begin(), _symbols.end(), s );
    if ( it == _symbols.end() || *it != s )
        throw UsageError( "symbol " + std::to_string( s ) + " is not a constant" );
    return static_cast< std::size_t >( it - _symbols.begin() );
}

Symbol ConstantSet::fresh( std::size_t i ) const
{
    // Constants are sorted, so walk them while they do not exceed the
    // candidate.
    Symbol candidate = static_cast< Symbol >( i + 1 );
    for ( Symbol c : _symbols )
    {
        if ( c == 0 )
            continue;
        if ( c <= candidate )
            ++candidate;
        else
            break;
    }
    return candidate;
}

RegisterAutomaton::RegisterAutomaton( std::vector< Action > actions, std::vector< std::string > registers,
                                      std::vector< std::string > locations, LocationId initial,
                                      std::vector< Transition > transitions, ConstantSet constants )
        : _actions{ std::move( actions ) }, _registers{ std::move( registers ) },
          _locations{ std::move( locations ) }, _initial{ initial }, _transitions{ std::move( transitions ) },
          _constants{ std::move( constants ) }
{
    validate();
    _outgoing.resize( _locations.size() );
    for ( std::size_t i = 0; i < _transitions.size(); ++i )
        _outgoing[ _transitions[ i ].source ].push_back( i );
}

namespace
{

template < typename T >
bool has_duplicates( const std::vector< T >& items )
{
    std::unordered_set< T > seen;
    for ( const auto& item : items )
        if ( !seen.insert( item ).second )
            return true;
    return false;
}

} // namespace

void RegisterAutomaton::validate() const
{
    if ( _registers.empty() )
        throw MalformedError( "an automaton needs at least one register" );
    if ( has_duplicates( _registers ) )
        throw MalformedError( "duplicate register name" );
    if ( _locations.empty() )
        throw MalformedError( "an automaton needs at least one location" );
    if ( has_duplicates( _locations ) )
        throw MalformedError( "duplicate location name" );
    if ( _initial >= _locations.size() )
        throw MalformedError( "initial location out of range" );

    std::vector< std::string > action_names;
    for ( const auto& a : _actions )
        action_names.push_back( a.name );
    if ( has_duplicates( action_names ) )
        throw MalformedError( "duplicate action name" );

    for ( std::size_t ti = 0; ti < _transitions.size(); ++ti )
    {
        const Transition& t = _transitions[ ti ];
        const std::string where = "transition " + std::to_string( ti ) + ": ";
        if ( t.source >= _locations.size() || t.target >= _locations.size() )
            throw MalformedError( where + "location out of range" );
        if ( t.action >= _actions.size() )
            throw MalformedError( where + "unknown action" );
        const std::size_t arity = _actions[ t.action ].arity;

        auto check_term = [ & ]( const Term& term ) {
            switch ( term.kind )
            {
            case Term::Kind::reg:
                if ( term.index >= _registers.size() )
                    throw MalformedError( where + "register index out of range" );
                break;
            case Term::Kind::param:
                if ( term.index == 0 || term.index > arity )
                    throw MalformedError( where + "parameter p" + std::to_string( term.index )
                                          + " exceeds the arity of " + _actions[ t.action ].name );
                break;
            case Term::Kind::constant:
                if ( !_constants.contains( term.symbol ) )
                    throw MalformedError( where + std::to_string( term.symbol ) + " is not a constant" );
                break;
            }
        };

        for ( const auto& atom : t.guard.atoms )
        {
            check_term( atom.lhs );
            check_term( atom.rhs );
        }
        std::vector< bool > bound( _registers.size(), false );
        for ( const auto& [ target, term ] : t.assignment.bindings )
        {
            if ( target >= _registers.size() )
                throw MalformedError( where + "assignment target out of range" );
            if ( bound[ target ] )
                throw MalformedError( where + "register " + _registers[ target ] + " assigned twice" );
            bound[ target ] = true;
            check_term( term );
        }
    }
}

std::size_t RegisterAutomaton::max_arity() const
{
    std::size_t result = 0;
    for ( const auto& a : _actions )
        result = std::max( result, a.arity );
    return result;
}

namespace
{

template < typename Range >
std::size_t find_name( const Range& names, const std::string& name )
{
    auto it = std::find( names.begin(), names.end(), name );
    return it == names.end() ? RegisterAutomaton::npos : static_cast< std::size_t >( it - names.begin() );
}

} // namespace

std::size_t RegisterAutomaton::find_register( const std::string& name ) const
{
    return find_name( _registers, name );
}

std::size_t RegisterAutomaton::find_location( const std::string& name ) const
{
    return find_name( _locations, name );
}

std::size_t RegisterAutomaton::find_action( const std::string& name ) const
{
    for ( std::size_t i = 0; i < _actions.size(); ++i )
        if ( _actions[ i ].name == name )
            return i;
    return npos;
}

std::vector< Symbol > make_pool( const ConstantSet& constants, std::size_t fresh_count )
{
    std::vector< Symbol > pool = constants.symbols();
    for ( std::size_t i = 0; i < fresh_count; ++i )
        pool.push_back( constants.fresh( i ) );
    std::sort( pool.begin(), pool.end() );
    return pool;
}

std::vector< Symbol > sufficient_pool( const RegisterAutomaton& ra )
{
    return make_pool( ra.constants(), ra.register_count() + ra.max_arity() + 1 );
}

Symbol eval_term( const Term& t, std::span< const Symbol > valuation, std::span< const Symbol > args )
{
    switch ( t.kind )
    {
    case Term::Kind::reg:
        if ( t.index >= valuation.size() )
            throw MalformedError( "register index out of range" );
        return valuation[ t.index ];
    case Term::Kind::param:
        if ( t.index == 0 || t.index > args.size() )
            throw MalformedError( "parameter p" + std::to_string( t.index ) + " out of range" );
        return args[ t.index - 1 ];
    case Term::Kind::constant:
        return t.symbol;
    }
    return 0;
}

bool eval_guard( const Guard& g, std::span< const Symbol > valuation, std::span< const Symbol > args )
{
    return std::all_of( g.atoms.begin(), g.atoms.end(), [ & ]( const GuardAtom& a ) {
        const bool equal = eval_term( a.lhs, valuation, args ) == eval_term( a.rhs, valuation, args );
        return a.polarity == Polarity::eq ? equal : !equal;
    } );
}

namespace
{

// Calls fn(v') for every v' in the assignment's image over pool.
template < typename Fn >
void for_each_assigned( const Assignment& pi, std::span< const Symbol > valuation, std::span< const Symbol > args,
                        std::span< const Symbol > pool, Fn&& fn )
{
    const std::size_t n = valuation.size();
    Valuation next( n, 0 );
    std::vector< bool > bound( n, false );
    for ( const auto& [ target, term ] : pi.bindings )
    {
        next[ target ] = eval_term( term, valuation, args );
        bound[ target ] = true;
    }
    std::vector< std::size_t > free;
    for ( std::size_t i = 0; i < n; ++i )
        if ( !bound[ i ] )
            free.push_back( i );

    if ( free.empty() )
    {
        fn( next );
        return;
    }
    if ( pool.empty() )
        return;

    // Odometer over pool^|free|.
    std::vector< std::size_t > digit( free.size(), 0 );
    for ( ;; )
    {
        for ( std::size_t k = 0; k < free.size(); ++k )
            next[ free[ k ] ] = pool[ digit[ k ] ];
        fn( next );
        std::size_t k = 0;
        while ( k < digit.size() && ++digit[ k ] == pool.size() )
            digit[ k++ ] = 0;
        if ( k == digit.size() )
            break;
    }
}

template < typename Fn >
void for_each_args( std::size_t arity, std::span< const Symbol > pool, Fn&& fn )
{
    std::vector< Symbol > args( arity, 0 );
    if ( arity == 0 )
    {
        fn( args );
        return;
    }
    if ( pool.empty() )
        return;
    std::vector< std::size_t > digit( arity, 0 );
    for ( ;; )
    {
        for ( std::size_t k = 0; k < arity; ++k )
            args[ k ] = pool[ digit[ k ] ];
        fn( args );
        std::size_t k = 0;
        while ( k < arity && ++digit[ k ] == pool.size() )
            digit[ k++ ] = 0;
        if ( k == arity )
            break;
    }
}

} // namespace

std::set< Valuation > apply_assignment( const Assignment& pi, std::span< const Symbol > valuation,
                                        std::span< const Symbol > args, std::span< const Symbol > pool )
{
    std::set< Valuation > result;
    for_each_assigned( pi, valuation, args, pool, [ & ]( const Valuation& v ) { result.insert( v ); } );
    return result;
}

std::set< Configuration > concrete_successors( const RegisterAutomaton& ra, const Configuration& c,
                                               std::span< const Symbol > pool )
{
    std::set< Configuration > result;
    for ( std::size_t ti : ra.outgoing( c.location ) )
    {
        const Transition& t = ra.transitions()[ ti ];
        for_each_args( ra.actions()[ t.action ].arity, pool, [ & ]( const std::vector< Symbol >& args ) {
            if ( !eval_guard( t.guard, c.valuation, args ) )
                return;
            for_each_assigned( t.assignment, c.valuation, args, pool,
                               [ & ]( const Valuation& v ) { result.insert( Configuration{ t.target, v } ); } );
        } );
    }
    return result;
}

bool transits( const RegisterAutomaton& ra, const Configuration& from, const DataSymbol& symbol,
               const Configuration& to )
{
    if ( from.location >= ra.location_count() || symbol.action >= ra.actions().size() )
        return false;
    if ( from.valuation.size() != ra.register_count() || to.valuation.size() != ra.register_count() )
        return false;
    if ( symbol.args.size() != ra.actions()[ symbol.action ].arity )
        return false;
    for ( std::size_t ti : ra.outgoing( from.location ) )
    {
        const Transition& t = ra.transitions()[ ti ];
        if ( t.action != symbol.action || t.target != to.location )
            continue;
        if ( !eval_guard( t.guard, from.valuation, symbol.args ) )
            continue;
        const bool matches = std::all_of( t.assignment.bindings.begin(), t.assignment.bindings.end(),
                                          [ & ]( const auto& binding ) {
                                              return to.valuation[ binding.first ]
                                                     == eval_term( binding.second, from.valuation, symbol.args );
                                          } );
        if ( matches )
            return true;
    }
    return false;
}

bool check_run( const RegisterAutomaton& ra, std::span< const DataSymbol > word,
                std::span< const Configuration > run )
{
    if ( run.size() != word.size() + 1 )
        throw UsageError( "a run over k data symbols has k + 1 configurations" );
    if ( run.front().location != ra.initial() || run.front().valuation.size() != ra.register_count() )
        return false;
    for ( std::size_t i = 0; i < word.size(); ++i )
        if ( !transits( ra, run[ i ], word[ i ], run[ i + 1 ] ) )
            return false;
    return true;
}

} // namespace regmc
