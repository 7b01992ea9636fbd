#include "regmc/ctl.hpp"

#include <bit>
#include <unordered_map>

namespace regmc
{

struct CtlFormula::Node
{
    Kind kind;
    std::size_t a = 0; // location or lhs register
    std::size_t b = 0; // rhs register
    Symbol c = 0;
    std::vector< CtlFormula > operands;
    std::size_t hash = 0;
    std::size_t depth = 0;
};

CtlFormula CtlFormula::make( Kind kind, std::size_t a, std::size_t b, Symbol c, std::vector< CtlFormula > operands )
{
    auto node = std::make_shared< Node >();
    node->kind = kind;
    node->a = a;
    node->b = b;
    node->c = c;
    std::size_t h = static_cast< std::size_t >( kind ) * 0x9e3779b97f4a7c15ULL;
    auto mix = [ &h ]( std::size_t v ) { h ^= v + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 ); };
    mix( a );
    mix( b );
    mix( c );
    std::size_t depth = 0;
    for ( const auto& op : operands )
    {
        mix( op.hash() );
        depth = std::max( depth, op.depth() + 1 );
    }
    node->hash = h;
    node->depth = depth;
    node->operands = std::move( operands );
    return CtlFormula( std::move( node ) );
}

CtlFormula CtlFormula::at_location( LocationId l ) { return make( Kind::at_location, l, 0, 0, {} ); }
CtlFormula CtlFormula::reg_eq( RegisterIndex i, RegisterIndex j ) { return make( Kind::reg_eq, i, j, 0, {} ); }
CtlFormula CtlFormula::reg_eq_const( RegisterIndex i, Symbol c ) { return make( Kind::reg_eq_const, i, 0, c, {} ); }
CtlFormula CtlFormula::negation( CtlFormula f ) { return make( Kind::negation, 0, 0, 0, { std::move( f ) } ); }
CtlFormula CtlFormula::conjunction( CtlFormula f, CtlFormula g )
{
    return make( Kind::conjunction, 0, 0, 0, { std::move( f ), std::move( g ) } );
}
CtlFormula CtlFormula::ex( CtlFormula f ) { return make( Kind::ex, 0, 0, 0, { std::move( f ) } ); }
CtlFormula CtlFormula::eu( CtlFormula f, CtlFormula g )
{
    return make( Kind::eu, 0, 0, 0, { std::move( f ), std::move( g ) } );
}
CtlFormula CtlFormula::eg( CtlFormula f ) { return make( Kind::eg, 0, 0, 0, { std::move( f ) } ); }

CtlFormula CtlFormula::falsum() { return negation( reg_eq( 0, 0 ) ); }
CtlFormula CtlFormula::verum() { return negation( falsum() ); }
CtlFormula CtlFormula::disjunction( CtlFormula f, CtlFormula g )
{
    return negation( conjunction( negation( std::move( f ) ), negation( std::move( g ) ) ) );
}
CtlFormula CtlFormula::implication( CtlFormula f, CtlFormula g )
{
    return disjunction( negation( std::move( f ) ), std::move( g ) );
}
CtlFormula CtlFormula::ax( CtlFormula f ) { return negation( ex( negation( std::move( f ) ) ) ); }
CtlFormula CtlFormula::ef( CtlFormula f ) { return eu( verum(), std::move( f ) ); }
CtlFormula CtlFormula::ag( CtlFormula f ) { return negation( ef( negation( std::move( f ) ) ) ); }
CtlFormula CtlFormula::af( CtlFormula f ) { return negation( eg( negation( std::move( f ) ) ) ); }

CtlFormula::Kind CtlFormula::kind() const { return _node->kind; }
bool CtlFormula::is_atomic() const
{
    return _node->kind == Kind::at_location || _node->kind == Kind::reg_eq || _node->kind == Kind::reg_eq_const;
}
LocationId CtlFormula::location() const { return _node->a; }
RegisterIndex CtlFormula::lhs_register() const { return _node->a; }
RegisterIndex CtlFormula::rhs_register() const { return _node->b; }
Symbol CtlFormula::constant() const { return _node->c; }
const std::vector< CtlFormula >& CtlFormula::operands() const { return _node->operands; }
std::size_t CtlFormula::hash() const { return _node->hash; }
std::size_t CtlFormula::depth() const { return _node->depth; }

bool operator==( const CtlFormula& x, const CtlFormula& y )
{
    if ( x._node == y._node )
        return true;
    const auto& a = *x._node;
    const auto& b = *y._node;
    return a.hash == b.hash && a.kind == b.kind && a.a == b.a && a.b == b.b && a.c == b.c && a.operands == b.operands;
}

void validate_formula( const CtlFormula& f, const RegisterAutomaton& ra )
{
    switch ( f.kind() )
    {
    case CtlFormula::Kind::at_location:
        if ( f.location() >= ra.location_count() )
            throw UsageError( "formula mentions an unknown location" );
        return;
    case CtlFormula::Kind::reg_eq:
        if ( f.lhs_register() >= ra.register_count() || f.rhs_register() >= ra.register_count() )
            throw UsageError( "formula mentions an unknown register" );
        return;
    case CtlFormula::Kind::reg_eq_const:
        if ( f.lhs_register() >= ra.register_count() )
            throw UsageError( "formula mentions an unknown register" );
        if ( !ra.constants().contains( f.constant() ) )
            throw UsageError( "formula mentions " + std::to_string( f.constant() ) + ", which is not a constant" );
        return;
    default:
        for ( const auto& op : f.operands() )
            validate_formula( op, ra );
    }
}

LabelSet::LabelSet( std::size_t universe_size, bool full )
        : _size{ universe_size }, _words( ( universe_size + 63 ) / 64, full ? ~std::uint64_t{ 0 } : 0 )
{
    if ( full && ( _size & 63 ) != 0 )
        _words.back() = ( std::uint64_t{ 1 } << ( _size & 63 ) ) - 1;
}

std::size_t LabelSet::count() const
{
    std::size_t total = 0;
    for ( auto w : _words )
        total += static_cast< std::size_t >( std::popcount( w ) );
    return total;
}

bool LabelSet::is_subset_of( const LabelSet& other ) const
{
    for ( std::size_t i = 0; i < _words.size(); ++i )
        if ( _words[ i ] & ~other._words[ i ] )
            return false;
    return true;
}

std::vector< NodeId > LabelSet::nodes() const
{
    std::vector< NodeId > out;
    for ( std::size_t i = 0; i < _words.size(); ++i )
    {
        std::uint64_t w = _words[ i ];
        while ( w )
        {
            out.push_back( static_cast< NodeId >( i * 64 + static_cast< std::size_t >( std::countr_zero( w ) ) ) );
            w &= w - 1;
        }
    }
    return out;
}

LabelSet& LabelSet::operator&=( const LabelSet& other )
{
    for ( std::size_t i = 0; i < _words.size(); ++i )
        _words[ i ] &= other._words[ i ];
    return *this;
}

LabelSet& LabelSet::operator|=( const LabelSet& other )
{
    for ( std::size_t i = 0; i < _words.size(); ++i )
        _words[ i ] |= other._words[ i ];
    return *this;
}

LabelSet LabelSet::complement() const
{
    LabelSet out( _size, true );
    for ( std::size_t i = 0; i < _words.size(); ++i )
        out._words[ i ] &= ~_words[ i ];
    return out;
}

LabelSet compute_ap( const QuotientGraph& graph, const CtlFormula& atom )
{
    if ( !atom.is_atomic() )
        throw UsageError( "compute_ap expects an atomic formula" );
    LabelSet out( graph.node_count() );
    const std::size_t m = graph.matrix_count();
    if ( atom.kind() == CtlFormula::Kind::at_location )
    {
        if ( atom.location() >= graph.location_count() )
            throw UsageError( "unknown location" );
        for ( std::size_t k = 0; k < m; ++k )
            out.insert( graph.node( atom.location(), k ) );
        return out;
    }
    const std::size_t n = graph.register_names().size();
    if ( atom.lhs_register() >= n || ( atom.kind() == CtlFormula::Kind::reg_eq && atom.rhs_register() >= n ) )
        throw UsageError( "unknown register" );
    for ( std::size_t k = 0; k < m; ++k )
    {
        const RepMatrix& r = graph.matrices()[ k ];
        bool holds = false;
        if ( atom.kind() == CtlFormula::Kind::reg_eq )
            holds = !r.at( atom.lhs_register(), atom.rhs_register() ).is_zero();
        else
            holds = r.at( atom.lhs_register(), atom.lhs_register() ) == MatrixEntry::constant( atom.constant() );
        if ( !holds )
            continue;
        for ( LocationId l = 0; l < graph.location_count(); ++l )
            out.insert( graph.node( l, k ) );
    }
    return out;
}

LabelSet compute_not( const QuotientGraph& graph, const LabelSet& s )
{
    if ( s.universe_size() != graph.node_count() )
        throw UsageError( "label set does not belong to this graph" );
    return s.complement();
}

LabelSet compute_and( const LabelSet& s0, const LabelSet& s1 )
{
    LabelSet out = s0;
    out &= s1;
    return out;
}

LabelSet compute_ex( const QuotientGraph& graph, const LabelSet& s )
{
    LabelSet out( graph.node_count() );
    for ( NodeId n = 0; n < graph.node_count(); ++n )
        for ( NodeId succ : graph.successors( n ) )
            if ( s.contains( succ ) )
            {
                out.insert( n );
                break;
            }
    return out;
}

LabelSet compute_eu( const QuotientGraph& graph, const LabelSet& s0, const LabelSet& s1,
                     std::vector< LabelSet >* iterates )
{
    LabelSet u = s1;
    LabelSet v( graph.node_count() );
    if ( iterates )
        iterates->push_back( u );
    bool first = true;
    while ( first || u != v )
    {
        first = false;
        LabelSet w = compute_ex( graph, u );
        w &= s0;
        v = u;
        u |= w;
        if ( iterates )
            iterates->push_back( u );
    }
    return u;
}

LabelSet compute_eg( const QuotientGraph& graph, const LabelSet& s, std::vector< LabelSet >* iterates )
{
    LabelSet u = s;
    if ( iterates )
        iterates->push_back( u );
    for ( ;; )
    {
        LabelSet next = compute_and( u, compute_ex( graph, u ) );
        if ( iterates )
            iterates->push_back( next );
        if ( next == u )
            return u;
        u = std::move( next );
    }
}

namespace
{

class Labeller
{
    const QuotientGraph& _graph;
    std::unordered_map< CtlFormula, LabelSet > _memo;

public:
    explicit Labeller( const QuotientGraph& graph ) : _graph{ graph } {}

    const LabelSet& label( const CtlFormula& f )
    {
        if ( auto it = _memo.find( f ); it != _memo.end() )
            return it->second;
        LabelSet result;
        const auto& ops = f.operands();
        switch ( f.kind() )
        {
        case CtlFormula::Kind::at_location:
        case CtlFormula::Kind::reg_eq:
        case CtlFormula::Kind::reg_eq_const:
            result = compute_ap( _graph, f );
            break;
        case CtlFormula::Kind::negation:
            result = compute_not( _graph, label( ops[ 0 ] ) );
            break;
        case CtlFormula::Kind::conjunction:
        {
            LabelSet lhs = label( ops[ 0 ] );
            result = compute_and( lhs, label( ops[ 1 ] ) );
            break;
        }
        case CtlFormula::Kind::ex:
            result = compute_ex( _graph, label( ops[ 0 ] ) );
            break;
        case CtlFormula::Kind::eu:
        {
            LabelSet lhs = label( ops[ 0 ] );
            result = compute_eu( _graph, lhs, label( ops[ 1 ] ) );
            break;
        }
        case CtlFormula::Kind::eg:
            result = compute_eg( _graph, label( ops[ 0 ] ) );
            break;
        }
        return _memo.emplace( f, std::move( result ) ).first->second;
    }
};

} // namespace

LabelSet compute_ctl( const QuotientGraph& graph, const CtlFormula& f )
{
    Labeller labeller( graph );
    return labeller.label( f );
}

bool model_check( const QuotientGraph& graph, const CtlFormula& f )
{
    const LabelSet sat = compute_ctl( graph, f );
    for ( std::size_t k = 0; k < graph.matrix_count(); ++k )
        if ( !sat.contains( graph.node( graph.initial(), k ) ) )
            return false;
    return true;
}

} // namespace regmc
