#include "regmc/eqlogic.hpp"

#include <map>

namespace regmc
{

Var Var::of_term( const Term& t, bool primed )
{
    switch ( t.kind )
    {
    case Term::Kind::reg:
        return primed ? Var::primed( t.index ) : Var::reg( t.index );
    case Term::Kind::param:
        return Var::param( t.index );
    case Term::Kind::constant:
        return Var::constant( t.symbol );
    }
    return {};
}

std::string to_string( const Var& v )
{
    switch ( v.kind )
    {
    case Var::Kind::reg:
        return "x" + std::to_string( v.value + 1 );
    case Var::Kind::primed:
        return "x" + std::to_string( v.value + 1 ) + "'";
    case Var::Kind::param:
        return "p" + std::to_string( v.value );
    case Var::Kind::constant:
        return std::to_string( v.value );
    }
    return "?";
}

std::string to_string( const Atom& a )
{
    return to_string( a.lhs ) + ( a.polarity == Polarity::eq ? " = " : " != " ) + to_string( a.rhs );
}

void ConstraintSystem::add( const Atom& a )
{
    _universe.insert( a.lhs );
    _universe.insert( a.rhs );
    _atoms.push_back( a );
}

void ConstraintSystem::add( const ConstraintSystem& other )
{
    _universe.insert( other._universe.begin(), other._universe.end() );
    _atoms.insert( _atoms.end(), other._atoms.begin(), other._atoms.end() );
}

std::vector< Atom > ConstraintSystem::equalities() const
{
    std::vector< Atom > out;
    for ( const auto& a : _atoms )
        if ( a.polarity == Polarity::eq )
            out.push_back( a );
    return out;
}

std::vector< Atom > ConstraintSystem::disequalities() const
{
    std::vector< Atom > out;
    for ( const auto& a : _atoms )
        if ( a.polarity == Polarity::neq )
            out.push_back( a );
    return out;
}

bool ConstraintSystem::contains( const Atom& a ) const
{
    for ( const auto& b : _atoms )
        if ( b == a || ( b.polarity == a.polarity && b.lhs == a.rhs && b.rhs == a.lhs ) )
            return true;
    return false;
}

ConstraintSystem conjoin( ConstraintSystem s, const Atom& a )
{
    s.add( a );
    return s;
}

ConstraintSystem conjoin( ConstraintSystem s, const ConstraintSystem& t )
{
    s.add( t );
    return s;
}

bool is_consistent( const ConstraintSystem& s )
{
    std::map< Var, std::uint32_t > ids;
    EqualityClosure closure;
    auto id_of = [ & ]( const Var& v ) {
        auto [ it, inserted ] = ids.try_emplace( v, 0 );
        if ( inserted )
        {
            it->second = closure.add_var();
            if ( v.kind == Var::Kind::constant )
                closure.tag_constant( it->second, v.value );
        }
        return it->second;
    };
    for ( const auto& v : s.universe() )
        id_of( v );
    for ( const auto& a : s.atoms() )
    {
        if ( a.polarity == Polarity::eq )
            closure.merge( id_of( a.lhs ), id_of( a.rhs ) );
        else
            closure.separate( id_of( a.lhs ), id_of( a.rhs ) );
    }
    return closure.consistent();
}

bool entails( const ConstraintSystem& s, const Atom& a )
{
    if ( !is_consistent( s ) )
        return true;
    return !is_consistent( conjoin( s, a.negated() ) );
}

void EqualityClosure::reset( std::size_t vars )
{
    _parent.resize( vars );
    for ( std::size_t i = 0; i < vars; ++i )
        _parent[ i ] = static_cast< std::uint32_t >( i );
    _rank.assign( vars, 0 );
    _constant.assign( vars, std::nullopt );
    _disequalities.clear();
    _conflict = false;
}

std::uint32_t EqualityClosure::add_var()
{
    const auto id = static_cast< std::uint32_t >( _parent.size() );
    _parent.push_back( id );
    _rank.push_back( 0 );
    _constant.emplace_back();
    return id;
}

void EqualityClosure::tag_constant( std::uint32_t v, Symbol c )
{
    const std::uint32_t root = find( v );
    if ( _constant[ root ] && *_constant[ root ] != c )
        _conflict = true;
    else
        _constant[ root ] = c;
}

std::uint32_t EqualityClosure::find( std::uint32_t v ) const
{
    // Ranked union keeps trees shallow enough that we can skip path
    // compression and keep find() const.
    while ( _parent[ v ] != v )
        v = _parent[ v ];
    return v;
}

void EqualityClosure::merge( std::uint32_t a, std::uint32_t b )
{
    std::uint32_t ra = find( a );
    std::uint32_t rb = find( b );
    if ( ra == rb )
        return;
    if ( _rank[ ra ] < _rank[ rb ] )
        std::swap( ra, rb );
    _parent[ rb ] = ra;
    if ( _rank[ ra ] == _rank[ rb ] )
        ++_rank[ ra ];
    if ( _constant[ rb ] )
    {
        if ( _constant[ ra ] && *_constant[ ra ] != *_constant[ rb ] )
            _conflict = true;
        else
            _constant[ ra ] = _constant[ rb ];
    }
}

bool EqualityClosure::consistent() const
{
    if ( _conflict )
        return false;
    for ( const auto& [ a, b ] : _disequalities )
        if ( find( a ) == find( b ) )
            return false;
    return true;
}

} // namespace regmc
