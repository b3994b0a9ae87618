#pragma once

// Umbrella header for the qcfd library: a matrix-free statevector simulator
// with the quantum and classical building blocks for solving the 1D
// advection-diffusion equation on simulated quantum hardware.

#include "qcfd/bell.hpp"
#include "qcfd/carleman.hpp"
#include "qcfd/circuit.hpp"
#include "qcfd/circuit_text.hpp"
#include "qcfd/csv.hpp"
#include "qcfd/encoding.hpp"
#include "qcfd/error.hpp"
#include "qcfd/evolution.hpp"
#include "qcfd/flow.hpp"
#include "qcfd/gate.hpp"
#include "qcfd/hhl.hpp"
#include "qcfd/json_io.hpp"
#include "qcfd/lcu.hpp"
#include "qcfd/mitigation.hpp"
#include "qcfd/noise.hpp"
#include "qcfd/overlap.hpp"
#include "qcfd/qft.hpp"
#include "qcfd/qpe.hpp"
#include "qcfd/quantum_march.hpp"
#include "qcfd/rng.hpp"
#include "qcfd/sampling.hpp"
#include "qcfd/shift.hpp"
#include "qcfd/statevector.hpp"
#include "qcfd/version.hpp"
#include "qcfd/vqa.hpp"
