#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polyver
{

enum class gate_kind : std::uint8_t
{
  and_,
  or_,
  nand,
  nor,
  xor_,
  inv,
  buf,
  mux
};

inline constexpr std::array<gate_kind, 8> all_gate_kinds = {
    gate_kind::and_, gate_kind::or_, gate_kind::nand, gate_kind::nor,
    gate_kind::xor_, gate_kind::inv, gate_kind::buf,  gate_kind::mux };

/* lowercase netlist spelling */
inline constexpr std::string_view to_string( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::and_: return "and";
  case gate_kind::or_: return "or";
  case gate_kind::nand: return "nand";
  case gate_kind::nor: return "nor";
  case gate_kind::xor_: return "xor";
  case gate_kind::inv: return "inv";
  case gate_kind::buf: return "buf";
  case gate_kind::mux: return "mux";
  }
  return "?";
}

inline std::optional<gate_kind> gate_kind_from_string( std::string_view name )
{
  for ( auto kind : all_gate_kinds )
  {
    if ( to_string( kind ) == name )
      return kind;
  }
  return std::nullopt;
}

/// True if `count` inputs are legal for `kind` (INV/BUF: 1, MUX: 3, others: at least 2).
inline constexpr bool arity_ok( gate_kind kind, std::size_t count )
{
  switch ( kind )
  {
  case gate_kind::inv:
  case gate_kind::buf:
    return count == 1u;
  case gate_kind::mux:
    return count == 3u;
  default:
    return count >= 2u;
  }
}

/// Input value that fixes the gate output on its own. XOR, MUX, INV and BUF have none.
inline constexpr std::optional<bool> controlling_value( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::and_:
  case gate_kind::nand:
    return false;
  case gate_kind::or_:
  case gate_kind::nor:
    return true;
  default:
    return std::nullopt;
  }
}

inline constexpr std::optional<bool> non_controlling_value( gate_kind kind )
{
  if ( auto cv = controlling_value( kind ) )
    return !*cv;
  return std::nullopt;
}

} // namespace polyver
