#pragma once

#include <cstdint>
#include <vector>

#include "ftnm/random.hpp"

// Concatenated-circuit combinatorics: the rectangle/block trees of a
// level-r encoded computation, the recursive (r,1)-sparseness predicate, and
// an abstract error-propagation semantics for working periods.
//
// The base computation has N locations, one per qubit.  Encoding at level r
// turns each location into an r-rectangle (a complete tree with branching
// A_C and depth r whose leaves are elementary locations) and each qubit into
// an r-block (branching m, depth r, leaves are physical qubits).  The code
// corrects 2 errors per block and each fault spreads to at most 1 qubit of a
// 1-block by the end of its 1-rectangle.

namespace ftnm {

struct CodeModel {
  int corrects = 2;
  int spread = 1;
  int qubits_per_block = 5;          // m
  int locations_per_rectangle = 5;   // A_C
};

// The analysis is specific to corrects = 2, spread = 1; other values are
// rejected rather than extrapolated.
CodeModel make_code_model(int qubits_per_block, int locations_per_rectangle, int corrects = 2,
                          int spread = 1);

struct CircuitLayout {
  int base_locations = 1;  // N
  int level = 0;           // r
  CodeModel code;

  std::uint64_t leaves_per_rectangle() const;  // A_C^r
  std::uint64_t total_leaves() const;          // N * A_C^r
  std::uint64_t qubits_per_top_block() const;  // m^r
};

CircuitLayout build_concatenation(int base_locations, int level, CodeModel code);

// Sorted distinct leaf (location) ids in [0, total_leaves()).
struct FaultSet {
  std::vector<std::uint64_t> faulty_leaves;
};

FaultSet make_fault_set(const CircuitLayout& layout, std::vector<std::uint64_t> ids);

// Recursive sparseness of a sorted id set over a forest of complete trees:
// a height-0 subtree is sparse iff it holds no id; a height-h subtree is
// sparse iff at most one child subtree is non-sparse.  `sorted_ids` live in
// [0, n_roots * branching^height); every root subtree must be sparse.
// Shared by the rectangle-tree (faults) and block-tree (errors) variants.
bool forest_sparse(const std::vector<std::uint64_t>& sorted_ids, std::uint64_t n_roots,
                   int height, int branching);

// (level,1)-sparseness of a fault set: sparse within every level-rectangle
// of the layout.  level ranges over [0, layout.level].
bool is_sparse(const FaultSet& faults, const CircuitLayout& layout, int level);

enum class FaultPhase {
  PreCorrection,    // early enough for the rectangle's EC step to absorb it
  DuringCorrection  // too late to correct; leaves residual errors
};

// One phase label per entry of the corresponding FaultSet.
struct PhaseSchedule {
  std::vector<FaultPhase> phases;
};

PhaseSchedule make_phase_schedule(const FaultSet& faults, std::vector<FaultPhase> phases);

struct FailedBlock {
  int root = 0;                // base location / top-block index
  int height = 0;              // block height (1 = 1-block, ... r = top block)
  std::uint64_t index = 0;     // node index among same-height blocks in the root
};

// Errors at a working-period boundary: per top block, the sorted set of
// errored physical qubits (local ids in [0, m^r)), plus the blocks whose
// correction capacity was exceeded along the way.
struct BlockErrorState {
  int base_blocks = 1;
  int level = 0;
  int qubits_per_block = 5;
  std::vector<std::vector<std::uint64_t>> errored_qubits;  // one list per root
  std::vector<FailedBlock> failed_blocks;

  bool any_failed() const { return !failed_blocks.empty(); }
  std::uint64_t total_errors() const;
};

// Abstract working-period semantics, applied independently per root
// rectangle.  Every rectangle opens with a correction step that absorbs the
// errors accumulated so far — the incoming errors plus, at the 1-rectangle
// level, the designated qubit of each pre-correction fault — unless the
// corrupted (non-sparse) sub-blocks exceed `corrects`, in which case the
// whole block fails (every qubit errored, block recorded in failed_blocks).
// Child rectangles then run in temporal order on their designated sub-blocks
// (child i acts on sub-block i mod m): a child with a non-sparse fault set
// corrupts its sub-block outright, a sparse child recurses.  At height 0 a
// fault corrupts the location's single qubit; during-correction faults at
// the 1-rectangle level survive to the end of the rectangle.
BlockErrorState propagate_errors(const CircuitLayout& layout, const FaultSet& faults,
                                 const PhaseSchedule& schedule);

// Same, but starting from the previous period's end state.
BlockErrorState propagate_errors(const CircuitLayout& layout, const FaultSet& faults,
                                 const PhaseSchedule& schedule, const BlockErrorState& incoming);

// (r,1)-sparseness of the errored-qubit sets over the block trees.
bool state_is_sparse(const BlockErrorState& state, const CircuitLayout& layout);

// Rejection-samples a fault set that is (r,1)-sparse, with the given mean
// number of faults per root rectangle before rejection.  Throws after 10^6
// failed attempts.
FaultSet sample_sparse_fault_set(const CircuitLayout& layout, Rng& rng,
                                 double mean_faults_per_rectangle);

PhaseSchedule random_phase_schedule(const FaultSet& faults, Rng& rng);

struct SparsePropagationReport {
  int trials = 0;
  int violations = 0;
};

// Property check: sparse fault sets propagated over two chained working
// periods must leave sparse error sets.  Reports the violation count
// (expected 0).
SparsePropagationReport sparse_propagation_check(const CircuitLayout& layout, int n_trials,
                                                 std::uint64_t seed);

}  // namespace ftnm
