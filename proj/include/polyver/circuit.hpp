#pragma once

#include "gate_kind.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace polyver
{

struct gate
{
  gate_kind kind;
  std::string output;
  std::vector<std::string> inputs; /* MUX: select, else, then */

  friend bool operator==( gate const&, gate const& ) = default;
};

struct constant_signal
{
  std::string name;
  bool value;

  friend bool operator==( constant_signal const&, constant_signal const& ) = default;
};

/// Combinational gate-level netlist. Gates are kept in declaration order.
struct circuit
{
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<constant_signal> constants;
  std::vector<gate> gates;

  std::size_t input_count() const noexcept { return inputs.size(); }
  std::size_t output_count() const noexcept { return outputs.size(); }

  friend bool operator==( circuit const&, circuit const& ) = default;
};

/// Structural problem in a circuit; `signal()` names the offending signal.
class circuit_error : public std::runtime_error
{
public:
  circuit_error( std::string const& what, std::string signal )
      : std::runtime_error( what + ": " + signal ), signal_( std::move( signal ) )
  {
  }

  std::string const& signal() const noexcept { return signal_; }

private:
  std::string signal_;
};

namespace detail
{

inline std::unordered_map<std::string, std::size_t> gate_producers( circuit const& c )
{
  std::unordered_map<std::string, std::size_t> producers;
  for ( std::size_t i = 0; i < c.gates.size(); ++i )
    producers.emplace( c.gates[i].output, i );
  return producers;
}

inline std::unordered_set<std::string> used_names( circuit const& c )
{
  std::unordered_set<std::string> names( c.inputs.begin(), c.inputs.end() );
  for ( auto const& k : c.constants )
    names.insert( k.name );
  for ( auto const& g : c.gates )
    names.insert( g.output );
  return names;
}

/* returns base if free, otherwise base_1, base_2, ...; the result is reserved */
inline std::string fresh_name( std::string const& base, std::unordered_set<std::string>& used )
{
  auto candidate = base;
  for ( std::size_t k = 1; used.contains( candidate ); ++k )
    candidate = base + "_" + std::to_string( k );
  used.insert( candidate );
  return candidate;
}

} // namespace detail

/// Checks name uniqueness, arities and that every referenced signal exists.
/// Cycles are reported by `topological_order`.
inline void check_declarations( circuit const& c )
{
  std::unordered_set<std::string> defined;
  auto define = [&]( std::string const& name ) {
    if ( !defined.insert( name ).second )
      throw circuit_error( "duplicate signal definition", name );
  };
  for ( auto const& name : c.inputs )
    define( name );
  for ( auto const& k : c.constants )
    define( k.name );
  for ( auto const& g : c.gates )
  {
    define( g.output );
    if ( !arity_ok( g.kind, g.inputs.size() ) )
      throw circuit_error( "wrong number of inputs for " + std::string( to_string( g.kind ) ) + " gate", g.output );
  }
  for ( auto const& g : c.gates )
    for ( auto const& in : g.inputs )
      if ( !defined.contains( in ) )
        throw circuit_error( "undefined signal", in );
  for ( auto const& po : c.outputs )
    if ( !defined.contains( po ) )
      throw circuit_error( "undefined signal", po );
}

/// Gate indices in dependency order, ties broken by declaration order.
inline std::vector<std::size_t> topological_indices( circuit const& c )
{
  check_declarations( c );
  const auto producers = detail::gate_producers( c );

  std::vector<std::size_t> pending( c.gates.size(), 0u );
  std::vector<std::vector<std::size_t>> consumers( c.gates.size() );
  for ( std::size_t i = 0; i < c.gates.size(); ++i )
  {
    for ( auto const& in : c.gates[i].inputs )
    {
      if ( auto it = producers.find( in ); it != producers.end() )
      {
        ++pending[i];
        consumers[it->second].push_back( i );
      }
    }
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for ( std::size_t i = 0; i < c.gates.size(); ++i )
    if ( pending[i] == 0u )
      ready.push( i );

  std::vector<std::size_t> order;
  order.reserve( c.gates.size() );
  while ( !ready.empty() )
  {
    const auto i = ready.top();
    ready.pop();
    order.push_back( i );
    for ( auto j : consumers[i] )
      if ( --pending[j] == 0u )
        ready.push( j );
  }

  if ( order.size() != c.gates.size() )
  {
    /* walk unresolved dependencies from any stuck gate until a gate repeats */
    std::size_t current = 0;
    while ( pending[current] == 0u )
      ++current;
    std::vector<char> seen( c.gates.size(), 0 );
    while ( !seen[current] )
    {
      seen[current] = 1;
      for ( auto const& in : c.gates[current].inputs )
      {
        auto it = producers.find( in );
        if ( it != producers.end() && pending[it->second] != 0u )
        {
          current = it->second;
          break;
        }
      }
    }
    throw circuit_error( "combinational cycle through signal", c.gates[current].output );
  }
  return order;
}

inline std::vector<gate> topological_order( circuit const& c )
{
  std::vector<gate> gates;
  for ( auto i : topological_indices( c ) )
    gates.push_back( c.gates[i] );
  return gates;
}

/// Throws `circuit_error` unless `c` is a well-formed DAG.
inline void validate( circuit const& c ) { (void)topological_indices( c ); }

/// Gate-input references plus PO references, for every declared signal.
inline std::map<std::string, std::size_t> fanout_counts( circuit const& c )
{
  std::map<std::string, std::size_t> counts;
  for ( auto const& name : c.inputs )
    counts[name] = 0u;
  for ( auto const& k : c.constants )
    counts[k.name] = 0u;
  for ( auto const& g : c.gates )
    counts[g.output];
  for ( auto const& g : c.gates )
    for ( auto const& in : g.inputs )
      ++counts[in];
  for ( auto const& po : c.outputs )
    ++counts[po];
  return counts;
}

struct tree_check
{
  bool is_tree;
  std::optional<std::string> violator;
};

/// Single output and every signal consumed at most once.
inline tree_check is_tree( circuit const& c )
{
  if ( c.outputs.size() != 1u )
    return { false, c.outputs.size() > 1u ? std::optional<std::string>( c.outputs[1] ) : std::nullopt };
  const auto counts = fanout_counts( c );
  auto over = [&]( std::string const& name ) { return counts.at( name ) > 1u; };
  for ( auto const& name : c.inputs )
    if ( over( name ) )
      return { false, name };
  for ( auto const& k : c.constants )
    if ( over( k.name ) )
      return { false, k.name };
  for ( auto const& g : c.gates )
    if ( over( g.output ) )
      return { false, g.output };
  return { true, std::nullopt };
}

/*! \brief PI indices in first-visit order of a depth-first traversal.
 *
 * Starts at the first PO and descends into gate inputs in declared order,
 * then continues with the remaining POs. PIs never reached are appended in
 * declaration order. Position k of the result is the PI placed at level k.
 */
inline std::vector<std::uint32_t> dfs_variable_order( circuit const& c )
{
  const auto producers = detail::gate_producers( c );
  std::unordered_map<std::string, std::uint32_t> pi_index;
  for ( std::uint32_t i = 0; i < c.inputs.size(); ++i )
    pi_index.emplace( c.inputs[i], i );

  std::vector<std::uint32_t> order;
  std::vector<char> pi_seen( c.inputs.size(), 0 );
  std::vector<char> gate_seen( c.gates.size(), 0 );
  std::vector<std::string const*> stack;

  for ( auto const& po : c.outputs )
  {
    stack.push_back( &po );
    while ( !stack.empty() )
    {
      auto const& name = *stack.back();
      stack.pop_back();
      if ( auto it = pi_index.find( name ); it != pi_index.end() )
      {
        if ( !pi_seen[it->second] )
        {
          pi_seen[it->second] = 1;
          order.push_back( it->second );
        }
        continue;
      }
      auto it = producers.find( name );
      if ( it == producers.end() || gate_seen[it->second] )
        continue;
      gate_seen[it->second] = 1;
      auto const& ins = c.gates[it->second].inputs;
      for ( auto rit = ins.rbegin(); rit != ins.rend(); ++rit )
        stack.push_back( &*rit );
    }
  }
  for ( std::uint32_t i = 0; i < c.inputs.size(); ++i )
    if ( !pi_seen[i] )
      order.push_back( i );
  return order;
}

/// Declaration order: PI i at level i.
inline std::vector<std::uint32_t> declared_variable_order( circuit const& c )
{
  std::vector<std::uint32_t> order( c.inputs.size() );
  for ( std::uint32_t i = 0; i < order.size(); ++i )
    order[i] = i;
  return order;
}

/*! \brief Rewrites every AND/OR/NAND/NOR/XOR gate into 2-input gates.
 *
 * k-input AND/OR/XOR become a left-associated chain. k-input NAND/NOR become an
 * AND/OR chain whose last gate is the inverting kind. The original output name
 * is kept on the last gate of each chain.
 */
inline circuit decompose_multi_input( circuit const& c )
{
  auto used = detail::used_names( c );
  circuit out{ c.inputs, c.outputs, c.constants, {} };
  for ( auto const& g : c.gates )
  {
    const bool multi = g.inputs.size() > 2u && g.kind != gate_kind::mux && g.kind != gate_kind::inv &&
                       g.kind != gate_kind::buf;
    if ( !multi )
    {
      out.gates.push_back( g );
      continue;
    }
    gate_kind chain = g.kind;
    if ( g.kind == gate_kind::nand )
      chain = gate_kind::and_;
    else if ( g.kind == gate_kind::nor )
      chain = gate_kind::or_;

    auto acc = g.inputs[0];
    for ( std::size_t i = 1; i + 1 < g.inputs.size(); ++i )
    {
      auto name = detail::fresh_name( g.output + "_d" + std::to_string( i ), used );
      out.gates.push_back( { chain, name, { acc, g.inputs[i] } } );
      acc = std::move( name );
    }
    out.gates.push_back( { g.kind, g.output, { acc, g.inputs.back() } } );
  }
  return out;
}

/// Replaces each MUX(s, g, h) by INV(s), AND(ns, g), AND(s, h), OR(a0, a1).
inline circuit expand_mux( circuit const& c )
{
  auto used = detail::used_names( c );
  circuit out{ c.inputs, c.outputs, c.constants, {} };
  for ( auto const& g : c.gates )
  {
    if ( g.kind != gate_kind::mux )
    {
      out.gates.push_back( g );
      continue;
    }
    auto const& sel = g.inputs[0];
    auto const& else_in = g.inputs[1];
    auto const& then_in = g.inputs[2];
    auto ns = detail::fresh_name( g.output + "_ns", used );
    auto a0 = detail::fresh_name( g.output + "_a0", used );
    auto a1 = detail::fresh_name( g.output + "_a1", used );
    out.gates.push_back( { gate_kind::inv, ns, { sel } } );
    out.gates.push_back( { gate_kind::and_, a0, { ns, else_in } } );
    out.gates.push_back( { gate_kind::and_, a1, { sel, then_in } } );
    out.gates.push_back( { gate_kind::or_, g.output, { a0, a1 } } );
  }
  return out;
}

/*! \brief Integer-indexed view of a validated circuit.
 *
 * PIs take ids 0..n-1 in declaration order, constants follow, then gate
 * outputs. Gates are stored in topological order.
 */
struct indexed_circuit
{
  struct node
  {
    gate_kind kind;
    std::uint32_t output;
    std::vector<std::uint32_t> inputs;
  };

  std::vector<std::string> names;
  std::vector<std::pair<std::uint32_t, bool>> constants;
  std::vector<node> gates;
  std::vector<std::uint32_t> outputs;
  std::size_t input_count{ 0u };

  std::size_t signal_count() const noexcept { return names.size(); }
};

inline indexed_circuit index_circuit( circuit const& c )
{
  const auto topo = topological_indices( c );
  indexed_circuit ic;
  ic.input_count = c.inputs.size();
  std::unordered_map<std::string, std::uint32_t> ids;
  auto add = [&]( std::string const& name ) {
    const auto id = static_cast<std::uint32_t>( ic.names.size() );
    ic.names.push_back( name );
    ids.emplace( name, id );
    return id;
  };
  for ( auto const& name : c.inputs )
    add( name );
  for ( auto const& k : c.constants )
    ic.constants.emplace_back( add( k.name ), k.value );
  for ( auto const& g : c.gates )
    add( g.output );
  for ( auto i : topo )
  {
    auto const& g = c.gates[i];
    indexed_circuit::node n{ g.kind, ids.at( g.output ), {} };
    for ( auto const& in : g.inputs )
      n.inputs.push_back( ids.at( in ) );
    ic.gates.push_back( std::move( n ) );
  }
  for ( auto const& po : c.outputs )
    ic.outputs.push_back( ids.at( po ) );
  return ic;
}

} // namespace polyver
