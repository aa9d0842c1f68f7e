#pragma once

#include "bdd.hpp"
#include "circuit.hpp"
#include "symbolic_sim.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace polyver
{

enum class expansion_mode
{
  mux,  /* one MUX gate per node */
  gates /* each MUX as INV + 2 AND + OR */
};

inline constexpr std::string_view to_string( expansion_mode mode )
{
  return mode == expansion_mode::mux ? "mux" : "gates";
}

/// BDD variables without a PI name, or a malformed name list.
class configuration_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct bdd_circuit
{
  circuit netlist;
  std::unordered_map<std::uint32_t, std::string> node_signals; /* node index -> MUX output */
  std::string const0_signal;
  std::string const1_signal;

  /// Signal carrying `f` (constants for terminals).
  std::string const& signal_of( node_ref f ) const
  {
    if ( f == manager::zero() )
      return const0_signal;
    if ( f == manager::one() )
      return const1_signal;
    return node_signals.at( f.index );
  }
};

/*! \brief Replaces each reachable BDD node by a multiplexer.
 *
 * Node v with variable x, low child L and high child H becomes
 * MUX(x, signal(L), signal(H)). Terminals become the constants `const0` and
 * `const1`, declared only when referenced. Shared nodes become shared signals.
 * `pi_names[v]` names variable v; every manager variable becomes a PI. The
 * netlist is emitted children first, PO j driven by roots[j].
 */
inline bdd_circuit expand_to_circuit( manager const& mgr, std::span<const node_ref> roots,
                                      std::vector<std::string> const& pi_names,
                                      expansion_mode mode = expansion_mode::mux )
{
  if ( pi_names.size() != mgr.var_count() )
    throw configuration_error( "expected " + std::to_string( mgr.var_count() ) + " variable names, got " +
                               std::to_string( pi_names.size() ) );
  const auto nodes = mgr.reachable( roots );
  for ( std::size_t v = 0; v < pi_names.size(); ++v )
    if ( pi_names[v].empty() )
      throw configuration_error( "variable " + std::to_string( v ) + " has no name" );

  bdd_circuit out;
  out.netlist.inputs = pi_names;
  std::unordered_set<std::string> used( pi_names.begin(), pi_names.end() );
  if ( used.size() != pi_names.size() )
    throw configuration_error( "variable names are not unique" );
  out.const0_signal = detail::fresh_name( "const0", used );
  out.const1_signal = detail::fresh_name( "const1", used );

  bool need0 = false, need1 = false;
  auto note = [&]( node_ref f ) {
    need0 = need0 || f == manager::zero();
    need1 = need1 || f == manager::one();
  };
  for ( auto r : roots )
    note( r );

  /* arena indices grow bottom-up, so ascending index order is children first */
  for ( auto v : nodes )
    out.node_signals.emplace( v.index, detail::fresh_name( "n" + std::to_string( v.index ), used ) );
  for ( auto v : nodes )
  {
    const auto lo = mgr.low( v );
    const auto hi = mgr.high( v );
    note( lo );
    note( hi );
    out.netlist.gates.push_back(
        { gate_kind::mux, out.node_signals.at( v.index ), { pi_names[mgr.var_of( v )], out.signal_of( lo ), out.signal_of( hi ) } } );
  }
  if ( need0 )
    out.netlist.constants.push_back( { out.const0_signal, false } );
  if ( need1 )
    out.netlist.constants.push_back( { out.const1_signal, true } );
  for ( auto r : roots )
    out.netlist.outputs.push_back( out.signal_of( r ) );

  if ( mode == expansion_mode::gates )
    out.netlist = expand_mux( out.netlist );
  return out;
}

struct roundtrip_violation
{
  std::string check;
  std::uint32_t node; /* original node index, 0 when not node-specific */
  std::string signal;
  std::string detail;
};

struct roundtrip_report
{
  expansion_mode mode{ expansion_mode::mux };
  std::size_t original_size{ 0u };
  std::size_t mux_count{ 0u };
  std::size_t max_internal_size{ 0u };
  std::size_t created_total{ 0u };
  std::size_t created_bound{ 0u };
  sim_stats stats;
  std::vector<roundtrip_violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/*! \brief Expands `roots`, simulates the netlist under the original order in a
 *  fresh manager and checks it against the original diagram.
 *
 * Checks, per original node v on variable x:
 *  - the MUX output BDD is node-for-node the sub-diagram rooted at v;
 *  - both data-input BDDs are independent of x;
 *  - in gates mode: INV(x) has size 1 and each AND output has size at most
 *    size(child) + 1.
 * Globally: one MUX per node, every internal signal at most s + 1 nodes and at
 * most 5*s*(s+2) nodes created by gate operations, s being the original size.
 */
inline roundtrip_report roundtrip_verify( manager const& mgr, std::span<const node_ref> roots,
                                          std::vector<std::string> const& pi_names, expansion_mode mode,
                                          std::size_t node_capacity = manager::default_capacity )
{
  roundtrip_report report;
  report.mode = mode;
  const auto nodes = mgr.reachable( roots );
  report.original_size = nodes.size();
  const auto s = report.original_size;
  report.created_bound = 5u * s * ( s + 2u );

  const auto built = expand_to_circuit( mgr, roots, pi_names, expansion_mode::mux );
  report.mux_count = built.netlist.gates.size();
  const auto netlist = mode == expansion_mode::gates ? expand_mux( built.netlist ) : built.netlist;

  auto fail = [&]( std::string check, std::uint32_t node, std::string signal, std::string detail ) {
    report.violations.push_back( { std::move( check ), node, std::move( signal ), std::move( detail ) } );
  };

  if ( report.mux_count != s )
    fail( "one_to_one", 0u, "", std::to_string( report.mux_count ) + " multiplexers for " + std::to_string( s ) + " nodes" );

  std::vector<std::uint32_t> pi_order( mgr.var_count() );
  for ( std::uint32_t level = 0; level < mgr.var_count(); ++level )
    pi_order[level] = mgr.var_at_level( level );
  auto run = simulate( netlist, pi_order, { node_capacity, false } );
  report.stats = run.stats;
  report.created_total = run.stats.created_total;
  if ( !run.completed() )
  {
    fail( "capacity", 0u, run.stats.failing_signal.value_or( "" ), "node capacity exceeded during simulation" );
    return report;
  }

  for ( auto const& row : run.stats.rows )
    if ( row.kind != "input" && row.kind != "const" )
      report.max_internal_size = std::max( report.max_internal_size, row.size );

  auto const& sim = run.mgr;
  auto independent = [&]( node_ref f, std::uint32_t var ) {
    const auto sup = sim.support( f );
    return !std::binary_search( sup.begin(), sup.end(), var );
  };

  for ( auto v : nodes )
  {
    auto const& sig = built.node_signals.at( v.index );
    const auto var = mgr.var_of( v );
    if ( !structurally_equal( mgr, v, sim, run.bdd( sig ) ) )
      fail( "mux_output", v.index, sig, "simulated BDD differs from the original node" );

    const auto lo = mgr.low( v );
    const auto hi = mgr.high( v );
    for ( auto const& data : { built.signal_of( lo ), built.signal_of( hi ) } )
      if ( !independent( run.bdd( data ), var ) )
        fail( "select_independence", v.index, data, "data input depends on " + pi_names[var] );
  }

  if ( mode == expansion_mode::gates )
  {
    /* expand_mux emits INV, AND(else), AND(then), OR per multiplexer */
    std::unordered_map<std::string, std::uint32_t> node_of_signal;
    for ( auto const& [index, sig] : built.node_signals )
      node_of_signal.emplace( sig, index );
    for ( std::size_t i = 0; i + 3 < netlist.gates.size(); i += 4 )
    {
      auto const& inv = netlist.gates[i];
      auto const& a0 = netlist.gates[i + 1];
      auto const& a1 = netlist.gates[i + 2];
      auto const& orr = netlist.gates[i + 3];
      const auto index = node_of_signal.at( orr.output );
      const node_ref v{ index };
      if ( const auto sz = sim.size( run.bdd( inv.output ) ); sz != 1u )
        fail( "inverter_size", index, inv.output, "size " + std::to_string( sz ) + ", expected 1" );
      const auto lo_size = mgr.size( mgr.low( v ) );
      const auto hi_size = mgr.size( mgr.high( v ) );
      if ( const auto sz = sim.size( run.bdd( a0.output ) ); sz > lo_size + 1u )
        fail( "and_size", index, a0.output, "size " + std::to_string( sz ) + " exceeds " + std::to_string( lo_size + 1u ) );
      if ( const auto sz = sim.size( run.bdd( a1.output ) ); sz > hi_size + 1u )
        fail( "and_size", index, a1.output, "size " + std::to_string( sz ) + " exceeds " + std::to_string( hi_size + 1u ) );
    }
  }

  for ( std::size_t j = 0; j < roots.size(); ++j )
    if ( !structurally_equal( mgr, roots[j], sim, run.bdd( netlist.outputs[j] ) ) )
      fail( "output", manager::is_terminal( roots[j] ) ? 0u : roots[j].index, netlist.outputs[j],
            "output BDD differs from the original root" );

  if ( report.max_internal_size > s + 1u )
    fail( "internal_size", 0u, "", "max internal size " + std::to_string( report.max_internal_size ) + " exceeds " +
                                       std::to_string( s + 1u ) );
  if ( report.created_total > report.created_bound )
    fail( "created_bound", 0u, "", std::to_string( report.created_total ) + " nodes created, bound " +
                                       std::to_string( report.created_bound ) );
  return report;
}

} // namespace polyver
