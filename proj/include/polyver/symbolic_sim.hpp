#pragma once

#include "bdd.hpp"
#include "circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace polyver
{

/// One row per signal, in simulation order (PIs, constants, then gates topologically).
struct signal_stat
{
  std::size_t topo_index;
  std::string signal;
  std::string kind; /* "input", "const" or the gate kind */
  std::size_t size;
  std::size_t created_cum;     /* nodes created by gate operations so far */
  std::size_t live_nodes;      /* nodes reachable from the needed roots after this step */
  std::size_t ite_entries_cum;
  bool is_output;
};

struct sim_stats
{
  std::size_t input_count{ 0u };
  std::vector<std::uint32_t> order_used; /* PI index at each level */
  std::vector<signal_stat> rows;
  std::size_t projection_nodes{ 0u };
  std::size_t created_total{ 0u };
  std::size_t peak_live{ 0u };
  std::size_t ite_entries_total{ 0u };
  std::size_t node_capacity{ 0u };
  bool completed{ false };
  std::optional<std::string> failing_signal;

  signal_stat const* find( std::string const& signal ) const
  {
    for ( auto const& r : rows )
      if ( r.signal == signal )
        return &r;
    return nullptr;
  }
};

struct sim_options
{
  std::size_t node_capacity{ manager::default_capacity };
  /* replace MUX gates by their INV/AND/OR realization before simulating */
  bool expand_mux{ false };
};

struct sim_result
{
  manager mgr;
  std::unordered_map<std::string, node_ref> signal_bdds;
  std::vector<std::string> outputs;
  sim_stats stats;

  bool completed() const noexcept { return stats.completed; }

  node_ref bdd( std::string const& signal ) const { return signal_bdds.at( signal ); }

  std::vector<node_ref> output_bdds() const
  {
    std::vector<node_ref> refs;
    for ( auto const& po : outputs )
      refs.push_back( signal_bdds.at( po ) );
    return refs;
  }
};

/// Converts "PI at each level" into the manager's "level of each PI".
inline std::vector<std::uint32_t> levels_from_order( std::vector<std::uint32_t> const& pi_order )
{
  std::vector<std::uint32_t> levels( pi_order.size(), static_cast<std::uint32_t>( pi_order.size() ) );
  for ( std::uint32_t level = 0; level < pi_order.size(); ++level )
  {
    const auto pi = pi_order[level];
    if ( pi >= pi_order.size() || levels[pi] != pi_order.size() )
      throw std::invalid_argument( "variable order is not a permutation of the primary inputs" );
    levels[pi] = level;
  }
  return levels;
}

namespace detail
{

/* counts nodes reachable from a multiset of roots via reference counts */
class live_tracker
{
public:
  explicit live_tracker( manager const& mgr ) : mgr_( mgr ) {}

  std::size_t live() const noexcept { return live_; }

  void add( node_ref root )
  {
    stack_.push_back( root );
    while ( !stack_.empty() )
    {
      const auto f = stack_.back();
      stack_.pop_back();
      if ( manager::is_terminal( f ) )
        continue;
      if ( refs_.size() <= f.index )
        refs_.resize( mgr_.arena_size(), 0u );
      if ( refs_[f.index]++ == 0u )
      {
        ++live_;
        stack_.push_back( mgr_.high( f ) );
        stack_.push_back( mgr_.low( f ) );
      }
    }
  }

  void remove( node_ref root )
  {
    stack_.push_back( root );
    while ( !stack_.empty() )
    {
      const auto f = stack_.back();
      stack_.pop_back();
      if ( manager::is_terminal( f ) )
        continue;
      if ( --refs_[f.index] == 0u )
      {
        --live_;
        stack_.push_back( mgr_.high( f ) );
        stack_.push_back( mgr_.low( f ) );
      }
    }
  }

private:
  manager const& mgr_;
  std::vector<std::uint32_t> refs_;
  std::vector<node_ref> stack_;
  std::size_t live_{ 0u };
};

} // namespace detail

/*! \brief Symbolic simulation: builds the BDD of every signal in topological order.
 *
 * `pi_order[k]` is the PI placed at level k. Projection nodes for all PIs
 * are created first; `created_cum` and `created_total` count only nodes
 * created afterwards by gate operations. Live nodes are those reachable from
 * all PIs, every signal that still has an unsimulated consumer, and the POs
 * simulated so far.
 *
 * On a capacity error the run stops; rows and BDDs of the signals finished
 * before the failing one are kept and `failing_signal` names it.
 */
inline sim_result simulate( circuit const& input, std::vector<std::uint32_t> const& pi_order, sim_options const& options = {} )
{
  const circuit expanded = options.expand_mux ? expand_mux( input ) : circuit{};
  circuit const& c = options.expand_mux ? expanded : input;
  if ( pi_order.size() != c.inputs.size() )
    throw std::invalid_argument( "variable order covers " + std::to_string( pi_order.size() ) + " of " +
                                 std::to_string( c.inputs.size() ) + " inputs" );
  const auto ic = index_circuit( c );
  const auto n = static_cast<std::uint32_t>( c.inputs.size() );

  sim_result result{ manager( n, levels_from_order( pi_order ), options.node_capacity ), {}, c.outputs, {} };
  auto& mgr = result.mgr;
  auto& stats = result.stats;
  stats.input_count = n;
  stats.order_used = pi_order;
  stats.node_capacity = options.node_capacity;

  std::vector<node_ref> bdds( ic.signal_count(), manager::zero() );
  std::vector<std::size_t> pending( ic.signal_count(), 0u );
  std::vector<char> is_po( ic.signal_count(), 0 );
  for ( auto const& g : ic.gates )
    for ( auto in : g.inputs )
      ++pending[in];
  for ( auto po : ic.outputs )
    is_po[po] = 1;

  detail::live_tracker live( mgr );
  std::size_t baseline = 0u;
  auto add_row = [&]( std::uint32_t id, std::string kind ) {
    stats.rows.push_back( { stats.rows.size(), ic.names[id], std::move( kind ), mgr.size( bdds[id] ),
                            mgr.created_count() - baseline, live.live(), mgr.ite_calls(), is_po[id] != 0 } );
    result.signal_bdds.emplace( ic.names[id], bdds[id] );
  };

  std::uint32_t projected = 0;
  try
  {
    for ( ; projected < n; ++projected )
      bdds[projected] = mgr.var( projected );
  }
  catch ( capacity_error const& )
  {
    stats.failing_signal = c.inputs[projected];
  }
  baseline = mgr.created_count();
  stats.projection_nodes = baseline;

  for ( std::uint32_t i = 0; i < projected; ++i )
    live.add( bdds[i] );
  for ( std::uint32_t i = 0; i < projected; ++i )
    add_row( i, "input" );
  if ( stats.failing_signal )
  {
    stats.peak_live = live.live();
    return result;
  }
  for ( auto const& [id, bit] : ic.constants )
  {
    bdds[id] = manager::constant( bit );
    add_row( id, "const" );
  }
  stats.peak_live = live.live();

  std::vector<node_ref> operands;
  for ( auto const& g : ic.gates )
  {
    operands.clear();
    for ( auto in : g.inputs )
      operands.push_back( bdds[in] );
    try
    {
      bdds[g.output] = mgr.apply( g.kind, operands );
    }
    catch ( capacity_error const& )
    {
      stats.failing_signal = ic.names[g.output];
      break;
    }

    if ( pending[g.output] > 0u || is_po[g.output] )
      live.add( bdds[g.output] );
    for ( auto in : g.inputs )
    {
      if ( --pending[in] == 0u && in >= n && !is_po[in] && !manager::is_terminal( bdds[in] ) )
        live.remove( bdds[in] );
    }
    stats.peak_live = std::max( stats.peak_live, live.live() );
    add_row( g.output, std::string( to_string( g.kind ) ) );
  }

  stats.created_total = mgr.created_count() - baseline;
  stats.ite_entries_total = mgr.ite_calls();
  stats.completed = !stats.failing_signal.has_value();
  return result;
}

/// Simulates under the depth-first order of the circuit.
inline sim_result simulate( circuit const& c, sim_options const& options = {} )
{
  return simulate( c, dfs_variable_order( c ), options );
}

struct poly_bound_config
{
  unsigned degree{ 1u };
  double coefficient{ 1.0 };
  std::size_t gate_gap{ 1u };
  /* value used for n; defaults to the PI count of the run */
  std::optional<std::size_t> scale;
};

struct bound_violation
{
  std::string signal;
  std::size_t size;
  double margin; /* size minus bound */
};

struct bound_report
{
  bool pass{ true };
  std::size_t scale{ 0u };
  double bound{ 0.0 };
  std::size_t checked{ 0u };
  std::vector<bound_violation> violations;
};

/*! \brief Checks size <= coefficient * n^degree on sampled signals.
 *
 * Samples every `gate_gap`-th gate output in simulation order plus every PO.
 * This is a measurement over one run; it fits nothing.
 */
inline bound_report check_poly_bound( sim_stats const& stats, poly_bound_config const& cfg )
{
  if ( cfg.gate_gap == 0u )
    throw std::invalid_argument( "gate gap must be at least 1" );
  bound_report report;
  report.scale = cfg.scale.value_or( stats.input_count );
  report.bound = cfg.coefficient * std::pow( static_cast<double>( report.scale ), static_cast<double>( cfg.degree ) );

  std::size_t gate_index = 0u;
  for ( auto const& row : stats.rows )
  {
    const bool is_gate = row.kind != "input" && row.kind != "const";
    bool sampled = row.is_output;
    if ( is_gate )
    {
      sampled = sampled || ( gate_index % cfg.gate_gap ) == cfg.gate_gap - 1u;
      ++gate_index;
    }
    if ( !sampled )
      continue;
    ++report.checked;
    if ( static_cast<double>( row.size ) > report.bound )
      report.violations.push_back( { row.signal, row.size, static_cast<double>( row.size ) - report.bound } );
  }
  report.pass = report.violations.empty();
  return report;
}

/// Raised by `top_variable_probe` when the literal's variable is not a fresh top variable.
class probe_precondition_error : public std::invalid_argument
{
public:
  probe_precondition_error( std::string const& what, std::uint32_t variable )
      : std::invalid_argument( what + ": variable " + std::to_string( variable ) ), variable_( variable )
  {
  }

  std::uint32_t variable() const noexcept { return variable_; }

private:
  std::uint32_t variable_;
};

struct probe_report
{
  node_ref result;
  std::size_t operand_size;
  std::size_t new_nodes;
  std::size_t ite_entries;
};

/*! \brief Measures op(literal, g) for a variable above all of g's support.
 *
 * The literal (x or NOT x) is built first, then the computed table is cleared
 * and only the single apply is measured.
 */
inline probe_report top_variable_probe( manager& mgr, node_ref g, std::uint32_t index, gate_kind op, bool positive )
{
  if ( op != gate_kind::and_ && op != gate_kind::or_ && op != gate_kind::nand && op != gate_kind::nor )
    throw std::invalid_argument( "probe supports AND, OR, NAND and NOR" );
  const auto top = mgr.level_of( index );
  const auto support = mgr.support( g );
  if ( std::binary_search( support.begin(), support.end(), index ) )
    throw probe_precondition_error( "probe variable occurs in the operand", index );
  for ( auto v : support )
    if ( mgr.level_of( v ) < top )
      throw probe_precondition_error( "operand variable lies above the probe variable", v );

  auto literal = mgr.var( index );
  if ( !positive )
    literal = mgr.negate( literal );
  mgr.clear_computed_table();
  const auto created_before = mgr.created_count();
  const auto calls_before = mgr.ite_calls();
  const auto result = mgr.apply( op, { literal, g } );
  return { result, mgr.size( g ), mgr.created_count() - created_before, mgr.ite_calls() - calls_before };
}

} // namespace polyver
