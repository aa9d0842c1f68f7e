#pragma once

#include "circuit.hpp"

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

/*
 * Line-based netlist format:
 *
 *   # comment
 *   .inputs a b c
 *   .outputs f
 *   .const zero 0
 *   .gate and t a b
 *   .gate mux f c t zero      (mux inputs: select else then)
 *   .end
 *
 * Directives are lowercase, names match [A-Za-z_][A-Za-z0-9_]*, ".end" is
 * mandatory. Gates may reference signals declared further down.
 */

namespace polyver
{

class parse_error : public std::runtime_error
{
public:
  parse_error( std::size_t line, std::string reason )
      : std::runtime_error( "line " + std::to_string( line ) + ": " + reason ), line_( line ), reason_( std::move( reason ) )
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::string const& reason() const noexcept { return reason_; }

private:
  std::size_t line_;
  std::string reason_;
};

inline bool valid_signal_name( std::string_view name )
{
  auto alpha = []( char ch ) { return ( ch >= 'a' && ch <= 'z' ) || ( ch >= 'A' && ch <= 'Z' ) || ch == '_'; };
  auto digit = []( char ch ) { return ch >= '0' && ch <= '9'; };
  if ( name.empty() || !alpha( name.front() ) )
    return false;
  for ( char ch : name )
    if ( !alpha( ch ) && !digit( ch ) )
      return false;
  return true;
}

namespace detail
{

inline std::vector<std::string> split_tokens( std::string_view line )
{
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    while ( i < line.size() && ( line[i] == ' ' || line[i] == '\t' ) )
      ++i;
    const auto start = i;
    while ( i < line.size() && line[i] != ' ' && line[i] != '\t' )
      ++i;
    if ( i > start )
      tokens.emplace_back( line.substr( start, i - start ) );
  }
  return tokens;
}

} // namespace detail

/// Parses a netlist document; throws `parse_error` on the first problem.
inline circuit parse_netlist( std::string_view text )
{
  circuit c;
  std::unordered_map<std::string, std::size_t> defined_at;
  std::vector<std::size_t> gate_lines;
  std::vector<std::pair<std::string, std::size_t>> output_refs;
  bool ended = false;
  std::size_t line_no = 0;

  auto define = [&]( std::string const& name, std::size_t line ) {
    if ( !valid_signal_name( name ) )
      throw parse_error( line, "invalid signal name '" + name + "'" );
    if ( !defined_at.emplace( name, line ).second )
      throw parse_error( line, "duplicate signal definition '" + name + "'" );
  };

  std::size_t pos = 0;
  while ( pos < text.size() )
  {
    auto end = text.find( '\n', pos );
    if ( end == std::string_view::npos )
      end = text.size();
    auto line = text.substr( pos, end - pos );
    pos = end + 1;
    ++line_no;
    if ( !line.empty() && line.back() == '\r' )
      line.remove_suffix( 1 );

    const auto tokens = detail::split_tokens( line );
    if ( tokens.empty() || tokens[0].front() == '#' )
      continue;
    if ( ended )
      throw parse_error( line_no, "content after .end" );

    auto const& directive = tokens[0];
    if ( directive == ".inputs" || directive == ".outputs" )
    {
      if ( tokens.size() < 2u )
        throw parse_error( line_no, directive + " needs at least one name" );
      for ( std::size_t i = 1; i < tokens.size(); ++i )
      {
        if ( directive == ".inputs" )
        {
          define( tokens[i], line_no );
          c.inputs.push_back( tokens[i] );
        }
        else
        {
          if ( !valid_signal_name( tokens[i] ) )
            throw parse_error( line_no, "invalid signal name '" + tokens[i] + "'" );
          c.outputs.push_back( tokens[i] );
          output_refs.emplace_back( tokens[i], line_no );
        }
      }
    }
    else if ( directive == ".const" )
    {
      if ( tokens.size() != 3u )
        throw parse_error( line_no, ".const expects a name and a bit" );
      if ( tokens[2] != "0" && tokens[2] != "1" )
        throw parse_error( line_no, "invalid constant value '" + tokens[2] + "'" );
      define( tokens[1], line_no );
      c.constants.push_back( { tokens[1], tokens[2] == "1" } );
    }
    else if ( directive == ".gate" )
    {
      if ( tokens.size() < 3u )
        throw parse_error( line_no, ".gate expects a kind, an output and inputs" );
      const auto kind = gate_kind_from_string( tokens[1] );
      if ( !kind )
        throw parse_error( line_no, "unknown gate kind '" + tokens[1] + "'" );
      const auto arity = tokens.size() - 3u;
      if ( !arity_ok( *kind, arity ) )
        throw parse_error( line_no, "wrong number of inputs for " + tokens[1] + " gate: " + std::to_string( arity ) );
      define( tokens[2], line_no );
      gate g{ *kind, tokens[2], {} };
      for ( std::size_t i = 3; i < tokens.size(); ++i )
      {
        if ( !valid_signal_name( tokens[i] ) )
          throw parse_error( line_no, "invalid signal name '" + tokens[i] + "'" );
        g.inputs.push_back( tokens[i] );
      }
      c.gates.push_back( std::move( g ) );
      gate_lines.push_back( line_no );
    }
    else if ( directive == ".end" )
    {
      if ( tokens.size() != 1u )
        throw parse_error( line_no, ".end takes no arguments" );
      ended = true;
    }
    else
    {
      throw parse_error( line_no, "unknown directive '" + directive + "'" );
    }
  }
  if ( !ended )
    throw parse_error( line_no == 0u ? 1u : line_no, "missing .end" );

  for ( std::size_t i = 0; i < c.gates.size(); ++i )
    for ( auto const& in : c.gates[i].inputs )
      if ( !defined_at.contains( in ) )
        throw parse_error( gate_lines[i], "undefined signal '" + in + "'" );
  for ( auto const& [name, line] : output_refs )
    if ( !defined_at.contains( name ) )
      throw parse_error( line, "undefined signal '" + name + "'" );

  try
  {
    validate( c );
  }
  catch ( circuit_error const& e )
  {
    throw parse_error( defined_at.at( e.signal() ), std::string( "combinational cycle through '" ) + e.signal() + "'" );
  }
  return c;
}

/// Canonical text: header comment, PIs, POs, constants, gates in topological order, ".end".
inline std::string serialize_netlist( circuit const& c )
{
  std::ostringstream os;
  os << "# polyver netlist\n";
  auto list = [&]( std::string_view directive, std::vector<std::string> const& names ) {
    if ( names.empty() )
      return;
    os << directive;
    for ( auto const& n : names )
      os << ' ' << n;
    os << '\n';
  };
  list( ".inputs", c.inputs );
  list( ".outputs", c.outputs );
  for ( auto const& k : c.constants )
    os << ".const " << k.name << ' ' << ( k.value ? '1' : '0' ) << '\n';
  for ( auto const& g : topological_order( c ) )
  {
    os << ".gate " << to_string( g.kind ) << ' ' << g.output;
    for ( auto const& in : g.inputs )
      os << ' ' << in;
    os << '\n';
  }
  os << ".end\n";
  return os.str();
}

inline circuit read_netlist_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw std::runtime_error( "cannot open " + path );
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_netlist( buf.str() );
}

} // namespace polyver
