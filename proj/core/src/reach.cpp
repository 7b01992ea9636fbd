#include "regmc/reach.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <thread>

namespace regmc
{

namespace
{

// Canonical form of a consistent matrix: restricted-growth block numbering
// per register and, per block, the index of its constant in C (-1 for none).
struct LabeledPartition
{
    std::vector< std::uint8_t > block;
    std::vector< std::int16_t > label;
};

LabeledPartition labeled_partition( const RepMatrix& r, const ConstantSet& constants )
{
    const RegisterClasses classes = classes_of( r );
    LabeledPartition out;
    out.block.resize( r.size() );
    for ( std::size_t b = 0; b < classes.blocks.size(); ++b )
    {
        for ( RegisterIndex i : classes.blocks[ b ] )
            out.block[ i ] = static_cast< std::uint8_t >( b );
        out.label.push_back( classes.labels[ b ] ? static_cast< std::int16_t >( constants.index_of( *classes.labels[ b ] ) )
                                                 : std::int16_t{ -1 } );
    }
    return out;
}

RepMatrix matrix_of_partition( const LabeledPartition& p, const ConstantSet& constants )
{
    const std::size_t n = p.block.size();
    RepMatrix r( n );
    for ( std::size_t i = 0; i < n; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            if ( p.block[ i ] == p.block[ j ] )
            {
                const std::int16_t label = p.label[ p.block[ i ] ];
                r.set( i, j, label < 0 ? MatrixEntry::one() : MatrixEntry::constant( constants.symbols()[ label ] ) );
            }
    return r;
}

void append_key( std::string& key, const std::vector< std::uint8_t >& block, const std::vector< std::int16_t >& label )
{
    for ( std::size_t i = 0; i < block.size(); ++i )
    {
        key.push_back( static_cast< char >( block[ i ] ) );
        key.push_back( static_cast< char >( label[ block[ i ] ] + 1 ) );
    }
}

std::string key_of( const LabeledPartition& p )
{
    std::string key;
    key.reserve( 2 * p.block.size() );
    append_key( key, p.block, p.label );
    return key;
}

// Computes Post for one automaton without scanning the universe. For a
// transition (l, a, g, pi, l') the constraint F = g & E(R) & E(pi) is closed
// under equality; the primed registers then fall into forced classes, and
// the successors are exactly the ways of merging compatible forced classes
// and labelling the resulting blocks with constants (or none) without
// contradicting a disequality of F.
class PostEngine
{
    const RegisterAutomaton& _ra;
    std::size_t _n;
    std::size_t _nc;
    std::size_t _param_base;
    std::size_t _const_base;
    std::size_t _var_count;
    EqualityClosure _closure;

    // Scratch state for one transition.
    std::size_t _q = 0;                      // number of forced classes over X'
    std::vector< std::size_t > _q_of_reg;    // primed register -> forced class
    std::vector< std::int16_t > _forced;     // forced class -> constant index or -1
    std::vector< std::uint8_t > _incompat;   // _q x _q
    std::vector< std::uint8_t > _forbidden;  // _q x _nc: class may not equal constant
    std::vector< std::uint8_t > _block_of_q; // forced class -> block
    std::vector< std::vector< std::size_t > > _members;
    std::vector< std::int16_t > _block_forced;
    std::vector< std::int16_t > _label;
    std::vector< std::uint8_t > _used;
    LabeledPartition _dst;

public:
    explicit PostEngine( const RegisterAutomaton& ra )
            : _ra{ ra }, _n{ ra.register_count() }, _nc{ ra.constants().size() }, _param_base{ 2 * _n },
              _const_base{ 2 * _n + ra.max_arity() }, _var_count{ _const_base + _nc }
    {
        if ( _n > 250 || _nc > 250 )
            throw UsageError( "too many registers or constants" );
        _dst.block.resize( _n );
    }

    // fn(target location, successor partition); a successor may be reported
    // more than once.
    template < typename Fn >
    void successors( LocationId l, const LabeledPartition& src, Fn&& fn )
    {
        for ( std::size_t ti : _ra.outgoing( l ) )
            transition_successors( _ra.transitions()[ ti ], src, fn );
    }

private:
    std::uint32_t var_of( const Term& t ) const
    {
        switch ( t.kind )
        {
        case Term::Kind::reg:
            return static_cast< std::uint32_t >( t.index );
        case Term::Kind::param:
            return static_cast< std::uint32_t >( _param_base + t.index - 1 );
        case Term::Kind::constant:
            return static_cast< std::uint32_t >( _const_base + _ra.constants().index_of( t.symbol ) );
        }
        return 0;
    }

    std::uint32_t primed( std::size_t i ) const { return static_cast< std::uint32_t >( _n + i ); }
    std::uint32_t constant( std::size_t c ) const { return static_cast< std::uint32_t >( _const_base + c ); }

    template < typename Fn >
    void transition_successors( const Transition& t, const LabeledPartition& src, Fn& fn )
    {
        _closure.reset( _var_count );
        for ( std::size_t c = 0; c < _nc; ++c )
            _closure.tag_constant( constant( c ), _ra.constants().symbols()[ c ] );

        // E(R)
        const std::size_t blocks = src.label.size();
        std::vector< std::uint32_t > rep( blocks, UINT32_MAX );
        for ( std::size_t i = 0; i < _n; ++i )
        {
            const std::uint8_t b = src.block[ i ];
            if ( rep[ b ] == UINT32_MAX )
                rep[ b ] = static_cast< std::uint32_t >( i );
            else
                _closure.merge( rep[ b ], static_cast< std::uint32_t >( i ) );
        }
        for ( std::size_t b = 0; b < blocks; ++b )
        {
            if ( src.label[ b ] >= 0 )
                _closure.merge( rep[ b ], constant( static_cast< std::size_t >( src.label[ b ] ) ) );
            else
                for ( std::size_t c = 0; c < _nc; ++c )
                    _closure.separate( rep[ b ], constant( c ) );
            for ( std::size_t b2 = b + 1; b2 < blocks; ++b2 )
                _closure.separate( rep[ b ], rep[ b2 ] );
        }

        // g
        for ( const auto& atom : t.guard.atoms )
        {
            if ( atom.polarity == Polarity::eq )
                _closure.merge( var_of( atom.lhs ), var_of( atom.rhs ) );
            else
                _closure.separate( var_of( atom.lhs ), var_of( atom.rhs ) );
        }

        // E(pi)
        for ( const auto& [ target, term ] : t.assignment.bindings )
            _closure.merge( primed( target ), var_of( term ) );

        if ( !_closure.consistent() )
            return;

        // Forced classes over X', numbered by first primed register.
        std::vector< std::int32_t > q_of_root( _var_count, -1 );
        std::vector< std::int32_t > c_of_root( _var_count, -1 );
        for ( std::size_t c = 0; c < _nc; ++c )
            c_of_root[ _closure.find( constant( c ) ) ] = static_cast< std::int32_t >( c );
        _q = 0;
        _q_of_reg.assign( _n, 0 );
        _forced.clear();
        for ( std::size_t i = 0; i < _n; ++i )
        {
            const std::uint32_t root = _closure.find( primed( i ) );
            if ( q_of_root[ root ] < 0 )
            {
                q_of_root[ root ] = static_cast< std::int32_t >( _q++ );
                _forced.push_back( static_cast< std::int16_t >( c_of_root[ root ] ) );
            }
            _q_of_reg[ i ] = static_cast< std::size_t >( q_of_root[ root ] );
        }

        _incompat.assign( _q * _q, 0 );
        _forbidden.assign( _q * _nc, 0 );
        for ( std::size_t a = 0; a < _q; ++a )
            for ( std::size_t b = 0; b < _q; ++b )
                if ( a != b && _forced[ a ] >= 0 && _forced[ b ] >= 0 )
                    _incompat[ a * _q + b ] = 1;
        for ( const auto& [ x, y ] : _closure.disequalities() )
        {
            const std::uint32_t rx = _closure.find( x );
            const std::uint32_t ry = _closure.find( y );
            const std::int32_t qx = q_of_root[ rx ];
            const std::int32_t qy = q_of_root[ ry ];
            if ( qx >= 0 && qy >= 0 )
            {
                _incompat[ qx * _q + qy ] = 1;
                _incompat[ qy * _q + qx ] = 1;
            }
            if ( qx >= 0 && c_of_root[ ry ] >= 0 )
                _forbidden[ qx * _nc + c_of_root[ ry ] ] = 1;
            if ( qy >= 0 && c_of_root[ rx ] >= 0 )
                _forbidden[ qy * _nc + c_of_root[ rx ] ] = 1;
        }

        _block_of_q.assign( _q, 0 );
        _members.clear();
        partition( 0, t.target, fn );
    }

    template < typename Fn >
    void partition( std::size_t qi, LocationId target, Fn& fn )
    {
        if ( qi == _q )
        {
            const std::size_t blocks = _members.size();
            _block_forced.assign( blocks, -1 );
            _used.assign( _nc, 0 );
            for ( std::size_t b = 0; b < blocks; ++b )
                for ( std::size_t m : _members[ b ] )
                    if ( _forced[ m ] >= 0 )
                    {
                        _block_forced[ b ] = _forced[ m ];
                        _used[ static_cast< std::size_t >( _forced[ m ] ) ] = 1;
                    }
            _label.assign( blocks, -1 );
            label( 0, target, fn );
            return;
        }
        for ( std::size_t b = 0; b < _members.size(); ++b )
        {
            const bool ok = std::none_of( _members[ b ].begin(), _members[ b ].end(),
                                          [ & ]( std::size_t m ) { return _incompat[ qi * _q + m ] != 0; } );
            if ( !ok )
                continue;
            _members[ b ].push_back( qi );
            _block_of_q[ qi ] = static_cast< std::uint8_t >( b );
            partition( qi + 1, target, fn );
            _members[ b ].pop_back();
        }
        _members.push_back( { qi } );
        _block_of_q[ qi ] = static_cast< std::uint8_t >( _members.size() - 1 );
        partition( qi + 1, target, fn );
        _members.pop_back();
    }

    template < typename Fn >
    void label( std::size_t b, LocationId target, Fn& fn )
    {
        if ( b == _members.size() )
        {
            for ( std::size_t i = 0; i < _n; ++i )
                _dst.block[ i ] = _block_of_q[ _q_of_reg[ i ] ];
            _dst.label = _label;
            fn( target, static_cast< const LabeledPartition& >( _dst ) );
            return;
        }
        if ( _block_forced[ b ] >= 0 )
        {
            _label[ b ] = _block_forced[ b ];
            label( b + 1, target, fn );
            return;
        }
        _label[ b ] = -1;
        label( b + 1, target, fn );
        for ( std::size_t c = 0; c < _nc; ++c )
        {
            if ( _used[ c ] )
                continue;
            const bool forbidden = std::any_of( _members[ b ].begin(), _members[ b ].end(),
                                                [ & ]( std::size_t m ) { return _forbidden[ m * _nc + c ] != 0; } );
            if ( forbidden )
                continue;
            _used[ c ] = 1;
            _label[ b ] = static_cast< std::int16_t >( c );
            label( b + 1, target, fn );
            _used[ c ] = 0;
        }
        _label[ b ] = -1;
    }
};

void require_consistent( const RegisterAutomaton& ra, const RepConfig& c )
{
    if ( c.location >= ra.location_count() )
        throw UsageError( "location out of range" );
    if ( c.matrix.size() != ra.register_count() )
        throw UsageError( "matrix size does not match the register count" );
    if ( !is_consistent_matrix( c.matrix, ra.constants() ) )
        throw PreconditionError( "representative configuration has an inconsistent matrix" );
}

// Literal guard/assignment lifting for the literal Post.
ConstraintSystem guard_formula( const Guard& g )
{
    ConstraintSystem s;
    for ( const auto& atom : g.atoms )
    {
        const Var a = Var::of_term( atom.lhs );
        const Var b = Var::of_term( atom.rhs );
        s.add( atom.polarity == Polarity::eq ? Atom::eq( a, b ) : Atom::neq( a, b ) );
    }
    return s;
}

} // namespace

std::vector< RepConfig > literal_post( const RegisterAutomaton& ra, const RepConfig& c )
{
    require_consistent( ra, c );
    const auto matrices = universe( ra.register_count(), ra.constants() );
    std::vector< Valuation > canonical;
    canonical.reserve( matrices.size() );
    for ( const auto& r : matrices )
        canonical.push_back( canonical_valuation( r, ra.constants() ) );

    const Valuation w = canonical_valuation( c.matrix, ra.constants() );
    const ConstraintSystem ew = formula_E_of_valuation( w, ra.constants(), false );
    std::set< RepConfig > out;
    for ( std::size_t ti : ra.outgoing( c.location ) )
    {
        const Transition& t = ra.transitions()[ ti ];
        ConstraintSystem f = guard_formula( t.guard );
        f.add( ew );
        f.add( formula_E_of_assignment( t.assignment ) );
        if ( !is_consistent( f ) )
            continue;
        for ( std::size_t k = 0; k < matrices.size(); ++k )
        {
            const ConstraintSystem f2 = conjoin( f, formula_E_of_valuation( canonical[ k ], ra.constants(), true ) );
            if ( is_consistent( f2 ) )
                out.insert( RepConfig{ t.target, matrices[ k ] } );
        }
    }
    return { out.begin(), out.end() };
}

std::vector< RepConfig > post( const RegisterAutomaton& ra, const RepConfig& c, PostMode mode )
{
    if ( mode == PostMode::literal )
        return literal_post( ra, c );
    require_consistent( ra, c );
    PostEngine engine( ra );
    std::set< RepConfig > out;
    engine.successors( c.location, labeled_partition( c.matrix, ra.constants() ),
                       [ & ]( LocationId target, const LabeledPartition& p ) {
                           out.insert( RepConfig{ target, matrix_of_partition( p, ra.constants() ) } );
                       } );
    return { out.begin(), out.end() };
}

std::optional< std::size_t > QuotientGraph::matrix_index( const RepMatrix& r ) const
{
    if ( r.size() != _register_names.size() || !is_consistent_matrix( r, _constants ) )
        return std::nullopt;
    auto it = _index.find( key_of( labeled_partition( r, _constants ) ) );
    if ( it == _index.end() )
        return std::nullopt;
    return it->second;
}

std::optional< NodeId > QuotientGraph::find( const RepConfig& c ) const
{
    if ( c.location >= _locations )
        return std::nullopt;
    auto m = matrix_index( c.matrix );
    if ( !m )
        return std::nullopt;
    return node( c.location, *m );
}

QuotientGraph QuotientGraph::build( const RegisterAutomaton& ra, const GraphOptions& options )
{
    QuotientGraph g;
    g._locations = ra.location_count();
    g._initial = ra.initial();
    g._register_names = ra.registers();
    g._location_names = ra.locations();
    g._constants = ra.constants();
    g._matrices = universe( ra.register_count(), ra.constants() );

    const std::size_t m = g._matrices.size();
    std::vector< LabeledPartition > partitions;
    partitions.reserve( m );
    g._index.reserve( m );
    for ( std::size_t i = 0; i < m; ++i )
    {
        partitions.push_back( labeled_partition( g._matrices[ i ], ra.constants() ) );
        g._index.emplace( key_of( partitions.back() ), static_cast< std::uint32_t >( i ) );
    }

    const std::size_t nodes = g.node_count();
    if ( nodes > UINT32_MAX )
        throw UsageError( "quotient graph too large" );

    // Successor lists for nodes [begin, end).
    auto compute = [ & ]( std::size_t begin, std::size_t end, std::vector< std::vector< NodeId > >& out ) {
        PostEngine engine( ra );
        std::string key;
        for ( std::size_t n = begin; n < end; ++n )
        {
            auto& succ = out[ n - begin ];
            const LocationId l = n / m;
            if ( options.mode == PostMode::literal )
            {
                for ( const auto& s : literal_post( ra, RepConfig{ l, g._matrices[ n % m ] } ) )
                    succ.push_back( g.node( s.location, *g.matrix_index( s.matrix ) ) );
            }
            else
            {
                engine.successors( l, partitions[ n % m ], [ & ]( LocationId target, const LabeledPartition& p ) {
                    key.clear();
                    append_key( key, p.block, p.label );
                    succ.push_back( g.node( target, g._index.at( key ) ) );
                } );
            }
            std::sort( succ.begin(), succ.end() );
            succ.erase( std::unique( succ.begin(), succ.end() ), succ.end() );
        }
    };

    g._offsets.assign( nodes + 1, 0 );
    const std::size_t workers = std::max< std::size_t >( 1, std::min< std::size_t >( options.threads, nodes ) );
    // Process in slabs so that only one slab of per-node vectors is alive at
    // a time.
    const std::size_t slab = std::max< std::size_t >( 4096, workers * 1024 );
    for ( std::size_t begin = 0; begin < nodes; begin += slab )
    {
        const std::size_t end = std::min( nodes, begin + slab );
        std::vector< std::vector< NodeId > > lists( end - begin );
        if ( options.threads == 0 || workers == 1 )
        {
            compute( begin, end, lists );
        }
        else
        {
            std::vector< std::thread > pool;
            const std::size_t chunk = ( end - begin + workers - 1 ) / workers;
            for ( std::size_t w = 0; w < workers; ++w )
            {
                const std::size_t lo = begin + w * chunk;
                const std::size_t hi = std::min( end, lo + chunk );
                if ( lo >= hi )
                    break;
                pool.emplace_back( [ &, lo, hi ] {
                    std::vector< std::vector< NodeId > > part( hi - lo );
                    compute( lo, hi, part );
                    for ( std::size_t k = 0; k < part.size(); ++k )
                        lists[ lo - begin + k ] = std::move( part[ k ] );
                } );
            }
            for ( auto& t : pool )
                t.join();
        }
        for ( std::size_t k = 0; k < lists.size(); ++k )
        {
            g._offsets[ begin + k + 1 ] = g._offsets[ begin + k ] + lists[ k ].size();
            g._targets.insert( g._targets.end(), lists[ k ].begin(), lists[ k ].end() );
        }
    }
    g._targets.shrink_to_fit();
    return g;
}

std::vector< bool > reachable_nodes( const QuotientGraph& graph )
{
    std::vector< bool > seen( graph.node_count(), false );
    std::deque< NodeId > frontier;
    for ( std::size_t i = 0; i < graph.matrix_count(); ++i )
    {
        const NodeId n = graph.node( graph.initial(), i );
        seen[ n ] = true;
        frontier.push_back( n );
    }
    while ( !frontier.empty() )
    {
        const NodeId n = frontier.front();
        frontier.pop_front();
        for ( NodeId s : graph.successors( n ) )
            if ( !seen[ s ] )
            {
                seen[ s ] = true;
                frontier.push_back( s );
            }
    }
    return seen;
}

namespace
{

// Breadth-first least fixpoint computing Post on demand. Stops early once
// `stop` returns true for a newly discovered configuration.
template < typename Stop >
std::vector< bool > explore( const RegisterAutomaton& ra, const std::vector< RepMatrix >& matrices,
                             const std::unordered_map< std::string, std::uint32_t >& index, Stop&& stop )
{
    const std::size_t m = matrices.size();
    std::vector< bool > seen( ra.location_count() * m, false );
    std::vector< LabeledPartition > partitions;
    partitions.reserve( m );
    for ( const auto& r : matrices )
        partitions.push_back( labeled_partition( r, ra.constants() ) );

    std::deque< std::size_t > frontier;
    for ( std::size_t i = 0; i < m; ++i )
    {
        const std::size_t n = ra.initial() * m + i;
        seen[ n ] = true;
        if ( stop( n ) )
            return seen;
        frontier.push_back( n );
    }
    PostEngine engine( ra );
    std::string key;
    bool done = false;
    while ( !frontier.empty() && !done )
    {
        const std::size_t n = frontier.front();
        frontier.pop_front();
        engine.successors( n / m, partitions[ n % m ], [ & ]( LocationId target, const LabeledPartition& p ) {
            if ( done )
                return;
            key.clear();
            append_key( key, p.block, p.label );
            const std::size_t s = target * m + index.at( key );
            if ( seen[ s ] )
                return;
            seen[ s ] = true;
            frontier.push_back( s );
            if ( stop( s ) )
                done = true;
        } );
    }
    return seen;
}

std::unordered_map< std::string, std::uint32_t > index_universe( const std::vector< RepMatrix >& matrices,
                                                                 const ConstantSet& constants )
{
    std::unordered_map< std::string, std::uint32_t > index;
    index.reserve( matrices.size() );
    for ( std::size_t i = 0; i < matrices.size(); ++i )
        index.emplace( key_of( labeled_partition( matrices[ i ], constants ) ), static_cast< std::uint32_t >( i ) );
    return index;
}

} // namespace

std::vector< RepConfig > reachable_set( const RegisterAutomaton& ra )
{
    const auto matrices = universe( ra.register_count(), ra.constants() );
    const auto index = index_universe( matrices, ra.constants() );
    const auto seen = explore( ra, matrices, index, []( std::size_t ) { return false; } );
    std::vector< RepConfig > out;
    for ( std::size_t n = 0; n < seen.size(); ++n )
        if ( seen[ n ] )
            out.push_back( RepConfig{ n / matrices.size(), matrices[ n % matrices.size() ] } );
    return out;
}

bool reach( const RegisterAutomaton& ra, const RepConfig& target )
{
    require_consistent( ra, target );
    const auto matrices = universe( ra.register_count(), ra.constants() );
    const auto index = index_universe( matrices, ra.constants() );
    const std::size_t goal = target.location * matrices.size()
                             + index.at( key_of( labeled_partition( target.matrix, ra.constants() ) ) );
    const auto seen = explore( ra, matrices, index, [ goal ]( std::size_t n ) { return n == goal; } );
    return seen[ goal ];
}

} // namespace regmc
