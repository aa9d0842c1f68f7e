#pragma once

#include "bdd_to_circuit.hpp"
#include "circuit.hpp"
#include "equivalence.hpp"
#include "generators.hpp"
#include "netlist_io.hpp"
#include "symbolic_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace polyver::cli
{

inline constexpr std::string_view tool_version = "0.1.0";

enum exit_code : int
{
  exit_ok = 0,
  exit_not_equivalent = 1,
  exit_aborted = 2,
  exit_usage = 3
};

struct run_config
{
  std::string command;
  std::vector<std::string> inputs;
  std::string order{ "dfs" };
  std::size_t capacity{ manager::default_capacity };
  std::optional<unsigned> poly_degree;
  std::optional<double> poly_coeff;
  std::size_t poly_gap{ 1u };
  std::uint64_t seed{ 0u };
  std::string format{ "json" };
  std::string mode{ "mux" };
  std::string out;
  std::string report;
  bool expand_mux{ false };
  std::size_t n{ 0u };
  std::size_t depth{ 0u };
};

inline std::string fnv1a_hex( std::string_view text )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( unsigned char ch : text )
  {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw( 16 ) << std::setfill( '0' ) << h;
  return os.str();
}

inline nlohmann::json config_json( run_config const& cfg )
{
  nlohmann::json j{ { "command", cfg.command }, { "inputs", cfg.inputs },  { "order", cfg.order },
                    { "capacity", cfg.capacity }, { "seed", cfg.seed },    { "format", cfg.format },
                    { "mode", cfg.mode },         { "poly_gap", cfg.poly_gap }, { "expand_mux", cfg.expand_mux } };
  j["poly_degree"] = cfg.poly_degree ? nlohmann::json( *cfg.poly_degree ) : nlohmann::json();
  j["poly_coeff"] = cfg.poly_coeff ? nlohmann::json( *cfg.poly_coeff ) : nlohmann::json();
  if ( cfg.command == "gen-tree" )
  {
    j["n"] = cfg.n;
    j["depth"] = cfg.depth;
  }
  return j;
}

/// Envelope shared by every JSON report: tool, version, seed, config and its hash.
inline nlohmann::json report_header( run_config const& cfg )
{
  const auto config = config_json( cfg );
  return { { "tool", "polyver" }, { "version", tool_version }, { "seed", cfg.seed },
           { "config", config },  { "config_hash", fnv1a_hex( config.dump() ) } };
}

inline nlohmann::json stats_json( sim_stats const& s, circuit const& c )
{
  nlohmann::json order = nlohmann::json::array();
  for ( auto pi : s.order_used )
    order.push_back( c.inputs.at( pi ) );
  nlohmann::json rows = nlohmann::json::array();
  for ( auto const& r : s.rows )
    rows.push_back( { { "topo_index", r.topo_index },       { "signal", r.signal },
                      { "gate_kind", r.kind },              { "signal_size", r.size },
                      { "created_cum", r.created_cum },     { "live_nodes", r.live_nodes },
                      { "ite_entries_cum", r.ite_entries_cum }, { "is_output", r.is_output } } );
  return { { "input_count", s.input_count },
           { "order_used", order },
           { "projection_nodes", s.projection_nodes },
           { "created_total", s.created_total },
           { "peak_live", s.peak_live },
           { "ite_entries_total", s.ite_entries_total },
           { "node_capacity", s.node_capacity },
           { "completed", s.completed },
           { "failing_signal", s.failing_signal ? nlohmann::json( *s.failing_signal ) : nlohmann::json() },
           { "rows", rows } };
}

inline std::string stats_csv( sim_stats const& s )
{
  std::ostringstream os;
  os << "topo_index,signal,gate_kind,signal_size,created_cum,live_nodes,ite_entries_cum\n";
  for ( auto const& r : s.rows )
    os << r.topo_index << ',' << r.signal << ',' << r.kind << ',' << r.size << ',' << r.created_cum << ','
       << r.live_nodes << ',' << r.ite_entries_cum << '\n';
  return os.str();
}

inline nlohmann::json bound_json( bound_report const& b, poly_bound_config const& cfg )
{
  nlohmann::json violations = nlohmann::json::array();
  for ( auto const& v : b.violations )
    violations.push_back( { { "signal", v.signal }, { "size", v.size }, { "margin", v.margin } } );
  return { { "pass", b.pass },     { "degree", cfg.degree }, { "coefficient", cfg.coefficient },
           { "gate_gap", cfg.gate_gap }, { "n", b.scale },   { "bound", b.bound },
           { "checked", b.checked }, { "violations", violations } };
}

namespace detail
{

/* order as "PI at each level" */
inline std::vector<std::uint32_t> resolve_order( std::string const& source, circuit const& c )
{
  if ( source == "dfs" )
    return dfs_variable_order( c );
  if ( source == "declared" )
    return declared_variable_order( c );
  if ( source.rfind( "file:", 0 ) == 0 )
  {
    const auto path = source.substr( 5 );
    std::ifstream in( path );
    if ( !in )
      throw std::runtime_error( "cannot open order file " + path );
    std::unordered_map<std::string, std::uint32_t> index;
    for ( std::uint32_t i = 0; i < c.inputs.size(); ++i )
      index.emplace( c.inputs[i], i );
    std::vector<std::uint32_t> order;
    std::vector<char> seen( c.inputs.size(), 0 );
    std::string name;
    while ( in >> name )
    {
      auto it = index.find( name );
      if ( it == index.end() )
        throw std::runtime_error( "order file names unknown input '" + name + "'" );
      if ( seen[it->second] )
        throw std::runtime_error( "order file lists input '" + name + "' twice" );
      seen[it->second] = 1;
      order.push_back( it->second );
    }
    if ( order.size() != c.inputs.size() )
      throw std::runtime_error( "order file covers " + std::to_string( order.size() ) + " of " +
                                std::to_string( c.inputs.size() ) + " inputs" );
    return order;
  }
  throw std::runtime_error( "unknown order source '" + source + "' (expected dfs, declared or file:PATH)" );
}

class output_sink
{
public:
  output_sink( std::string const& path, std::ostream& fallback ) : stream_( &fallback )
  {
    if ( !path.empty() )
    {
      file_.open( path, std::ios::binary );
      if ( !file_ )
        throw std::runtime_error( "cannot write " + path );
      stream_ = &file_;
    }
  }

  std::ostream& stream() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline std::string assignment_text( std::vector<bool> const& bits, circuit const& c )
{
  std::string s;
  for ( std::size_t i = 0; i < bits.size(); ++i )
    s += ( i ? " " : "" ) + c.inputs[i] + "=" + ( bits[i] ? "1" : "0" );
  return s;
}

inline int cmd_verify( run_config const& cfg, std::ostream& out )
{
  const auto left = read_netlist_file( cfg.inputs.at( 0 ) );
  const auto right = read_netlist_file( cfg.inputs.at( 1 ) );
  const auto order = resolve_order( cfg.order, left );
  const auto outcome = check_equivalence( left, right, order, { cfg.capacity, cfg.expand_mux } );
  const auto miter = build_miter( left, right );

  output_sink sink( cfg.out, out );
  if ( cfg.format == "text" )
  {
    sink.stream() << "verdict: " << to_string( outcome.result ) << '\n';
    if ( outcome.counterexample )
      sink.stream() << "counterexample: " << assignment_text( *outcome.counterexample, left ) << '\n';
    if ( outcome.stats.failing_signal )
      sink.stream() << "failing signal: " << *outcome.stats.failing_signal << '\n';
  }
  else
  {
    auto j = report_header( cfg );
    j["verdict"] = to_string( outcome.result );
    if ( outcome.counterexample )
    {
      nlohmann::json cex = nlohmann::json::object();
      for ( std::size_t i = 0; i < left.inputs.size(); ++i )
        cex[left.inputs[i]] = ( *outcome.counterexample )[i] ? 1 : 0;
      j["counterexample"] = cex;
    }
    else
    {
      j["counterexample"] = nullptr;
    }
    j["stats_ref"] = "#/stats";
    j["stats"] = stats_json( outcome.stats, miter );
    sink.stream() << j.dump( 2 ) << '\n';
  }
  switch ( outcome.result )
  {
  case verdict::equivalent: return exit_ok;
  case verdict::not_equivalent: return exit_not_equivalent;
  default: return exit_aborted;
  }
}

inline int cmd_simulate( run_config const& cfg, std::ostream& out )
{
  const auto c = read_netlist_file( cfg.inputs.at( 0 ) );
  const auto order = resolve_order( cfg.order, c );
  const auto run = simulate( c, order, { cfg.capacity, cfg.expand_mux } );
  const circuit& simulated = cfg.expand_mux ? expand_mux( c ) : c;

  std::optional<poly_bound_config> poly;
  if ( cfg.poly_degree || cfg.poly_coeff )
    poly = poly_bound_config{ cfg.poly_degree.value_or( 1u ), cfg.poly_coeff.value_or( 1.0 ), cfg.poly_gap, std::nullopt };
  const auto bound = poly ? std::optional<bound_report>( check_poly_bound( run.stats, *poly ) ) : std::nullopt;

  output_sink sink( cfg.out, out );
  auto& os = sink.stream();
  if ( cfg.format == "csv" )
  {
    os << stats_csv( run.stats );
    if ( bound )
    {
      os << "# poly_bound pass=" << ( bound->pass ? "true" : "false" ) << " n=" << bound->scale
         << " bound=" << bound->bound << " checked=" << bound->checked << " violations=" << bound->violations.size() << '\n';
      for ( auto const& v : bound->violations )
        os << "# violation signal=" << v.signal << " size=" << v.size << " margin=" << v.margin << '\n';
    }
    if ( run.stats.failing_signal )
      os << "# aborted at " << *run.stats.failing_signal << '\n';
  }
  else if ( cfg.format == "text" )
  {
    os << "inputs: " << run.stats.input_count << '\n'
       << "completed: " << ( run.stats.completed ? "yes" : "no" ) << '\n'
       << "created_total: " << run.stats.created_total << '\n'
       << "peak_live: " << run.stats.peak_live << '\n'
       << "ite_entries_total: " << run.stats.ite_entries_total << '\n';
    for ( auto const& po : c.outputs )
      if ( auto const* row = run.stats.find( po ) )
        os << "size(" << po << "): " << row->size << '\n';
    if ( run.stats.failing_signal )
      os << "aborted at: " << *run.stats.failing_signal << '\n';
    if ( bound )
      os << "poly_bound: " << ( bound->pass ? "pass" : "fail" ) << " (" << bound->violations.size() << " violations)\n";
  }
  else
  {
    auto j = report_header( cfg );
    j["stats"] = stats_json( run.stats, simulated );
    if ( bound )
      j["poly_bound"] = bound_json( *bound, *poly );
    os << j.dump( 2 ) << '\n';
  }
  return run.completed() ? exit_ok : exit_aborted;
}

inline int cmd_gen_tree( run_config const& cfg, std::ostream& out )
{
  const auto c = generate_tree( cfg.n, cfg.depth, cfg.seed );
  output_sink sink( cfg.out, out );
  sink.stream() << serialize_netlist( c );
  return exit_ok;
}

inline int cmd_expand_bdd( run_config const& cfg, std::ostream& out, std::ostream& err )
{
  const auto c = read_netlist_file( cfg.inputs.at( 0 ) );
  const auto order = resolve_order( cfg.order, c );
  const auto mode = cfg.mode == "gates" ? expansion_mode::gates : expansion_mode::mux;
  const auto run = simulate( c, order, { cfg.capacity, cfg.expand_mux } );

  auto j = report_header( cfg );
  if ( !run.completed() )
  {
    j["stage"] = "input_simulation";
    j["failing_signal"] = *run.stats.failing_signal;
    output_sink sink( cfg.report, cfg.out.empty() ? err : out );
    sink.stream() << j.dump( 2 ) << '\n';
    return exit_aborted;
  }

  const auto roots = run.output_bdds();
  const auto built = expand_to_circuit( run.mgr, roots, c.inputs, mode );
  const auto report = roundtrip_verify( run.mgr, roots, c.inputs, mode, cfg.capacity );

  {
    output_sink sink( cfg.out, out );
    sink.stream() << serialize_netlist( built.netlist );
  }

  nlohmann::json violations = nlohmann::json::array();
  for ( auto const& v : report.violations )
    violations.push_back( { { "check", v.check }, { "node", v.node }, { "signal", v.signal }, { "detail", v.detail } } );
  j["mode"] = to_string( mode );
  j["roundtrip_ok"] = report.ok();
  j["original_size"] = report.original_size;
  j["mux_count"] = report.mux_count;
  j["max_internal_size"] = report.max_internal_size;
  j["created_total"] = report.created_total;
  j["created_bound"] = report.created_bound;
  j["violations"] = violations;
  j["stats"] = stats_json( report.stats, mode == expansion_mode::gates ? expand_mux( built.netlist ) : built.netlist );
  {
    output_sink sink( cfg.report, cfg.out.empty() ? err : out );
    sink.stream() << j.dump( 2 ) << '\n';
  }

  if ( report.stats.failing_signal )
    return exit_aborted;
  return report.ok() ? exit_ok : exit_not_equivalent;
}

} // namespace detail

/*! \brief Runs one command line (without the program name).
 *
 * Exit codes: 0 success / equivalent, 1 not equivalent or failed round trip,
 * 2 node capacity exceeded, 3 usage, I/O or parse error.
 */
inline int run( std::vector<std::string> args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "BDD-based symbolic simulation and equivalence checking", "polyver" };
  app.require_subcommand( 1 );
  app.set_version_flag( "--version", std::string( tool_version ) );
  run_config cfg;

  auto add_common = [&]( CLI::App* sub ) {
    sub->add_option( "--order", cfg.order, "Variable order: dfs, declared or file:PATH" )->capture_default_str();
    sub->add_option( "--capacity", cfg.capacity, "Node capacity of the BDD manager" )->capture_default_str();
    sub->add_option( "--seed", cfg.seed, "Seed recorded in reports" )->capture_default_str();
    sub->add_option( "--out", cfg.out, "Output path (default: standard output)" );
    sub->add_flag( "--expand-mux", cfg.expand_mux, "Simulate MUX gates through their INV/AND/OR realization" );
  };

  auto* verify = app.add_subcommand( "verify", "Check two netlists for equivalence via a miter" );
  verify->add_option( "left", cfg.inputs, "Left and right netlists" )->required()->expected( 2 );
  verify->add_option( "--format", cfg.format, "json or text" )->check( CLI::IsMember( { "json", "text" } ) );
  add_common( verify );

  auto* sim = app.add_subcommand( "simulate", "Symbolically simulate a netlist and report statistics" );
  sim->add_option( "circuit", cfg.inputs, "Netlist" )->required()->expected( 1 );
  sim->add_option( "--format", cfg.format, "json, csv or text" )->check( CLI::IsMember( { "json", "csv", "text" } ) );
  sim->add_option( "--poly-degree", cfg.poly_degree, "Degree k of the size bound a*n^k" );
  sim->add_option( "--poly-coeff", cfg.poly_coeff, "Coefficient a of the size bound a*n^k" );
  sim->add_option( "--poly-gap", cfg.poly_gap, "Check every C-th gate" )->check( CLI::PositiveNumber )->capture_default_str();
  add_common( sim );

  auto* gen = app.add_subcommand( "gen-tree", "Print a random fanout-free netlist" );
  gen->add_option( "--n", cfg.n, "Number of inputs" )->required()->check( CLI::Range( std::size_t{ 2 }, std::size_t{ 1 } << 24 ) );
  gen->add_option( "--depth", cfg.depth, "Maximum binary-gate depth (0 = unbounded)" )->capture_default_str();
  gen->add_option( "--seed", cfg.seed, "Random seed" )->capture_default_str();
  gen->add_option( "--out", cfg.out, "Output path (default: standard output)" );

  auto* expand = app.add_subcommand( "expand-bdd", "Build the BDD-circuit of a netlist's outputs and verify it" );
  expand->add_option( "circuit", cfg.inputs, "Netlist" )->required()->expected( 1 );
  expand->add_option( "--mode", cfg.mode, "mux or gates" )->check( CLI::IsMember( { "mux", "gates" } ) )->capture_default_str();
  expand->add_option( "--report", cfg.report, "Round-trip report path" );
  add_common( expand );

  std::reverse( args.begin(), args.end() );
  try
  {
    app.parse( args );
  }
  catch ( CLI::CallForHelp const& )
  {
    out << app.help();
    return exit_ok;
  }
  catch ( CLI::CallForVersion const& )
  {
    out << tool_version << '\n';
    return exit_ok;
  }
  catch ( CLI::ParseError const& e )
  {
    err << "polyver: " << e.what() << '\n';
    return exit_usage;
  }

  try
  {
    if ( verify->parsed() )
    {
      cfg.command = "verify";
      if ( cfg.format != "text" )
        cfg.format = "json";
      return detail::cmd_verify( cfg, out );
    }
    if ( sim->parsed() )
    {
      cfg.command = "simulate";
      return detail::cmd_simulate( cfg, out );
    }
    if ( gen->parsed() )
    {
      cfg.command = "gen-tree";
      return detail::cmd_gen_tree( cfg, out );
    }
    cfg.command = "expand-bdd";
    return detail::cmd_expand_bdd( cfg, out, err );
  }
  catch ( parse_error const& e )
  {
    err << "polyver: " << e.what() << '\n';
  }
  catch ( std::exception const& e )
  {
    err << "polyver: " << e.what() << '\n';
  }
  return exit_usage;
}

} // namespace polyver::cli
