#pragma once

#include "bdd.hpp"
#include "bdd_to_circuit.hpp"
#include "circuit.hpp"
#include "equivalence.hpp"
#include "gate_kind.hpp"
#include "generators.hpp"
#include "netlist_io.hpp"
#include "oracle.hpp"
#include "symbolic_sim.hpp"
