#pragma once

#include "h4qpe/errors.hpp"
#include "h4qpe/tensor.hpp"
#include "h4qpe/molsys.hpp"
#include "h4qpe/excitation.hpp"
#include "h4qpe/scf.hpp"
#include "h4qpe/fcidump.hpp"
#include "h4qpe/pauli.hpp"
#include "h4qpe/qham.hpp"
#include "h4qpe/statevector.hpp"
#include "h4qpe/rng.hpp"
#include "h4qpe/evolution.hpp"
#include "h4qpe/ansatz.hpp"
#include "h4qpe/cobyla.hpp"
#include "h4qpe/vqe.hpp"
#include "h4qpe/fci.hpp"
#include "h4qpe/parallel.hpp"
#include "h4qpe/iqpe.hpp"
#include "h4qpe/config.hpp"
#include "h4qpe/experiments.hpp"
#include "h4qpe/plot.hpp"
