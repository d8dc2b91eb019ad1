#ifndef MLIL_MLIL_HPP
#define MLIL_MLIL_HPP

// Umbrella header: multi-label imbalance measures, local-imbalance samplers
// (MLSOL, MLUL, MLROS, MLRUS), self-contained learners, evaluation machinery
// and the EMLS ensemble.

#include "mlil/arff.hpp"
#include "mlil/csv.hpp"
#include "mlil/dataset.hpp"
#include "mlil/ensemble.hpp"
#include "mlil/error.hpp"
#include "mlil/evaluation.hpp"
#include "mlil/imbalance.hpp"
#include "mlil/json_io.hpp"
#include "mlil/learners.hpp"
#include "mlil/matrix.hpp"
#include "mlil/neighbors.hpp"
#include "mlil/parallel.hpp"
#include "mlil/random.hpp"
#include "mlil/sampling.hpp"
#include "mlil/text.hpp"

#endif
