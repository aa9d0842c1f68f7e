#pragma once

// Test-only helpers: random circuit and BDD generators, circuit rewrites, and
// a bit-vector function model that shares no code with the BDD engine.

#include <polyver/bdd.hpp>
#include <polyver/circuit.hpp>
#include <polyver/generators.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace polyver::test
{

/// Boolean function over `vars` inputs stored as a 2^vars row vector; row bit i = x_i.
struct bitfn
{
  std::size_t vars{ 0u };
  std::vector<bool> rows;

  static bitfn constant( std::size_t vars, bool value ) { return { vars, std::vector<bool>( std::size_t{ 1 } << vars, value ) }; }

  static bitfn projection( std::size_t vars, std::size_t index )
  {
    bitfn f = constant( vars, false );
    for ( std::size_t r = 0; r < f.rows.size(); ++r )
      f.rows[r] = ( r >> index ) & 1u;
    return f;
  }

  template<class Op>
  static bitfn pointwise( bitfn const& a, bitfn const& b, Op op )
  {
    bitfn f = constant( a.vars, false );
    for ( std::size_t r = 0; r < f.rows.size(); ++r )
      f.rows[r] = op( a.rows[r], b.rows[r] );
    return f;
  }

  friend bitfn operator!( bitfn const& a )
  {
    bitfn f = a;
    f.rows.flip();
    return f;
  }
  friend bitfn operator&( bitfn const& a, bitfn const& b ) { return pointwise( a, b, []( bool x, bool y ) { return x && y; } ); }
  friend bitfn operator|( bitfn const& a, bitfn const& b ) { return pointwise( a, b, []( bool x, bool y ) { return x || y; } ); }
  friend bitfn operator^( bitfn const& a, bitfn const& b ) { return pointwise( a, b, []( bool x, bool y ) { return x != y; } ); }

  static bitfn ite( bitfn const& f, bitfn const& g, bitfn const& h ) { return ( f & g ) | ( ( !f ) & h ); }

  static bitfn apply( gate_kind kind, std::vector<bitfn> const& ops )
  {
    switch ( kind )
    {
    case gate_kind::inv: return !ops[0];
    case gate_kind::buf: return ops[0];
    case gate_kind::mux: return ite( ops[0], ops[2], ops[1] );
    default: break;
    }
    bitfn acc = ops[0];
    for ( std::size_t i = 1; i < ops.size(); ++i )
    {
      if ( kind == gate_kind::and_ || kind == gate_kind::nand )
        acc = acc & ops[i];
      else if ( kind == gate_kind::or_ || kind == gate_kind::nor )
        acc = acc | ops[i];
      else
        acc = acc ^ ops[i];
    }
    return ( kind == gate_kind::nand || kind == gate_kind::nor ) ? !acc : acc;
  }

  friend bool operator==( bitfn const&, bitfn const& ) = default;
};

inline std::vector<bool> assignment_of_row( std::size_t row, std::size_t vars )
{
  std::vector<bool> a( vars );
  for ( std::size_t i = 0; i < vars; ++i )
    a[i] = ( row >> i ) & 1u;
  return a;
}

/// Shannon-expansion evaluator walking node fields directly.
inline bool shannon_eval( manager const& mgr, node_ref f, std::vector<bool> const& a )
{
  if ( f == manager::zero() )
    return false;
  if ( f == manager::one() )
    return true;
  auto const& n = mgr.node( f );
  const auto v = mgr.var_at_level( n.level );
  return a[v] ? shannon_eval( mgr, n.high, a ) : shannon_eval( mgr, n.low, a );
}

/// Truth table of a BDD by walking every row.
inline bitfn table_of( manager const& mgr, node_ref f )
{
  bitfn t = bitfn::constant( mgr.var_count(), false );
  for ( std::size_t r = 0; r < t.rows.size(); ++r )
    t.rows[r] = shannon_eval( mgr, f, assignment_of_row( r, mgr.var_count() ) );
  return t;
}

/// A BDD and its bit-vector model built side by side.
struct tracked
{
  node_ref ref;
  bitfn fn;
};

/// Random function built from `steps` random gate applications over the manager's variables.
inline tracked random_function( manager& mgr, portable_rng& rng, std::size_t steps )
{
  const auto n = mgr.var_count();
  std::vector<tracked> pool;
  for ( std::uint32_t v = 0; v < n; ++v )
    pool.push_back( { mgr.var( v ), bitfn::projection( n, v ) } );
  constexpr gate_kind kinds[] = { gate_kind::and_, gate_kind::or_,  gate_kind::nand, gate_kind::nor,
                                  gate_kind::xor_, gate_kind::inv,  gate_kind::mux };
  for ( std::size_t s = 0; s < steps; ++s )
  {
    const auto kind = kinds[rng.below( std::size( kinds ) )];
    const std::size_t arity = kind == gate_kind::inv ? 1u : kind == gate_kind::mux ? 3u : 2u;
    std::vector<node_ref> refs;
    std::vector<bitfn> fns;
    for ( std::size_t i = 0; i < arity; ++i )
    {
      /* favour recent results so functions grow */
      const auto pick = pool.size() - 1u - rng.below( std::min<std::size_t>( pool.size(), 6u ) );
      const auto& t = rng.chance( 1, 3 ) ? pool[rng.below( pool.size() )] : pool[pick];
      refs.push_back( t.ref );
      fns.push_back( t.fn );
    }
    pool.push_back( { mgr.apply( kind, refs ), bitfn::apply( kind, fns ) } );
  }
  return pool.back();
}

struct random_circuit_config
{
  std::size_t inputs{ 6u };
  std::size_t gates{ 20u };
  std::size_t outputs{ 2u };
  std::size_t max_fanin{ 4u };
  bool use_mux{ true };
  bool use_xor{ true };
  bool use_constants{ false };
};

/// Random DAG in topological declaration order; signals may fan out freely.
inline circuit random_circuit( portable_rng& rng, random_circuit_config const& cfg )
{
  circuit c;
  std::vector<std::string> signals;
  for ( std::size_t i = 0; i < cfg.inputs; ++i )
  {
    c.inputs.push_back( "x" + std::to_string( i ) );
    signals.push_back( c.inputs.back() );
  }
  if ( cfg.use_constants )
  {
    c.constants.push_back( { "k0", false } );
    c.constants.push_back( { "k1", true } );
    signals.push_back( "k0" );
    signals.push_back( "k1" );
  }
  std::vector<gate_kind> kinds = { gate_kind::and_, gate_kind::or_, gate_kind::nand, gate_kind::nor,
                                   gate_kind::inv,  gate_kind::buf };
  if ( cfg.use_xor )
    kinds.push_back( gate_kind::xor_ );
  if ( cfg.use_mux )
    kinds.push_back( gate_kind::mux );

  for ( std::size_t g = 0; g < cfg.gates; ++g )
  {
    const auto kind = kinds[rng.below( kinds.size() )];
    std::size_t arity = 2u;
    if ( kind == gate_kind::inv || kind == gate_kind::buf )
      arity = 1u;
    else if ( kind == gate_kind::mux )
      arity = 3u;
    else
      arity = static_cast<std::size_t>( rng.between( 2u, std::max<std::size_t>( 2u, cfg.max_fanin ) ) );
    gate gt{ kind, "g" + std::to_string( g ), {} };
    for ( std::size_t i = 0; i < arity; ++i )
    {
      const auto recent = std::min<std::size_t>( signals.size(), 8u );
      const auto idx = rng.chance( 1, 2 ) ? signals.size() - 1u - rng.below( recent ) : rng.below( signals.size() );
      gt.inputs.push_back( signals[idx] );
    }
    signals.push_back( gt.output );
    c.gates.push_back( std::move( gt ) );
  }
  for ( std::size_t o = 0; o < cfg.outputs; ++o )
  {
    const auto recent = std::min<std::size_t>( c.gates.size(), 4u );
    c.outputs.push_back( c.gates.empty() ? signals[rng.below( signals.size() )]
                                         : c.gates[c.gates.size() - 1u - rng.below( recent )].output );
  }
  return c;
}

/// Rewrites AND/OR/NAND/NOR gates into their De Morgan duals over inverted inputs.
inline circuit de_morgan( circuit const& c )
{
  std::unordered_set<std::string> used( c.inputs.begin(), c.inputs.end() );
  for ( auto const& k : c.constants )
    used.insert( k.name );
  for ( auto const& g : c.gates )
    used.insert( g.output );
  circuit out{ c.inputs, c.outputs, c.constants, {} };
  for ( auto const& g : c.gates )
  {
    gate_kind dual;
    switch ( g.kind )
    {
    case gate_kind::and_: dual = gate_kind::nor; break;
    case gate_kind::or_: dual = gate_kind::nand; break;
    case gate_kind::nand: dual = gate_kind::or_; break;
    case gate_kind::nor: dual = gate_kind::and_; break;
    default:
      out.gates.push_back( g );
      continue;
    }
    gate rewritten{ dual, g.output, {} };
    for ( std::size_t i = 0; i < g.inputs.size(); ++i )
    {
      auto name = detail::fresh_name( g.output + "_n" + std::to_string( i ), used );
      out.gates.push_back( { gate_kind::inv, name, { g.inputs[i] } } );
      rewritten.inputs.push_back( std::move( name ) );
    }
    out.gates.push_back( std::move( rewritten ) );
  }
  return out;
}

/// Changes the kind of one randomly chosen multi-input gate; returns false if there is none.
inline bool mutate_one_gate( circuit& c, portable_rng& rng )
{
  std::vector<std::size_t> candidates;
  for ( std::size_t i = 0; i < c.gates.size(); ++i )
  {
    const auto k = c.gates[i].kind;
    if ( k != gate_kind::mux && k != gate_kind::inv && k != gate_kind::buf )
      candidates.push_back( i );
  }
  if ( candidates.empty() )
    return false;
  auto& g = c.gates[candidates[rng.below( candidates.size() )]];
  constexpr gate_kind kinds[] = { gate_kind::and_, gate_kind::or_, gate_kind::nand, gate_kind::nor, gate_kind::xor_ };
  gate_kind next;
  do
  {
    next = kinds[rng.below( 5u )];
  } while ( next == g.kind );
  g.kind = next;
  return true;
}

} // namespace polyver::test
