#include "ftnm/concat_circuit.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ftnm {

namespace {

std::uint64_t ipow_checked(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > (std::uint64_t{1} << 62) / base)
      throw std::overflow_error("circuit layout size overflows 64-bit bookkeeping");
    out *= base;
  }
  return out;
}

// Recursive sparseness over sorted ids in [lo, lo + width), width =
// branching^height.  id_of projects an iterator element to its id.
template <typename It, typename Proj>
bool range_sparse(It first, It last, std::uint64_t lo, int height, std::uint64_t width,
                  int branching, Proj id_of) {
  if (height == 0) return first == last;
  const std::uint64_t child_width = width / branching;
  int non_sparse_children = 0;
  It it = first;
  for (int c = 0; c < branching && it != last; ++c) {
    const std::uint64_t child_hi = lo + (c + 1) * child_width;
    It child_end = std::lower_bound(
        it, last, child_hi,
        [&](const auto& elem, std::uint64_t v) { return id_of(elem) < v; });
    if (child_end != it) {
      if (!range_sparse(it, child_end, child_hi - child_width, height - 1, child_width, branching,
                        id_of)) {
        if (++non_sparse_children > 1) return false;
      }
      it = child_end;
    }
  }
  return true;
}

constexpr auto kIdentityProj = [](std::uint64_t id) { return id; };

}  // namespace

CodeModel make_code_model(int qubits_per_block, int locations_per_rectangle, int corrects,
                          int spread) {
  if (corrects != 2 || spread != 1)
    throw std::invalid_argument(
        "make_code_model: the analysis requires corrects = 2 and spread = 1");
  if (qubits_per_block < 1)
    throw std::invalid_argument("make_code_model: qubits_per_block must be >= 1");
  if (locations_per_rectangle < 2)
    throw std::invalid_argument("make_code_model: locations_per_rectangle must be >= 2");
  return CodeModel{corrects, spread, qubits_per_block, locations_per_rectangle};
}

std::uint64_t CircuitLayout::leaves_per_rectangle() const {
  return ipow_checked(code.locations_per_rectangle, level);
}

std::uint64_t CircuitLayout::total_leaves() const {
  const std::uint64_t per = leaves_per_rectangle();
  if (per > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(base_locations))
    throw std::overflow_error("circuit layout size overflows 64-bit bookkeeping");
  return per * static_cast<std::uint64_t>(base_locations);
}

std::uint64_t CircuitLayout::qubits_per_top_block() const {
  return ipow_checked(code.qubits_per_block, level);
}

CircuitLayout build_concatenation(int base_locations, int level, CodeModel code) {
  if (base_locations < 1)
    throw std::invalid_argument("build_concatenation: base_locations must be >= 1");
  if (level < 0) throw std::invalid_argument("build_concatenation: level must be >= 0");
  make_code_model(code.qubits_per_block, code.locations_per_rectangle, code.corrects,
                  code.spread);
  CircuitLayout layout{base_locations, level, code};
  layout.total_leaves();  // overflow check
  layout.qubits_per_top_block();
  return layout;
}

FaultSet make_fault_set(const CircuitLayout& layout, std::vector<std::uint64_t> ids) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("make_fault_set: duplicate leaf id");
  const std::uint64_t total = layout.total_leaves();
  if (!ids.empty() && ids.back() >= total)
    throw std::invalid_argument("make_fault_set: leaf id " + std::to_string(ids.back()) +
                                " outside layout with " + std::to_string(total) + " leaves");
  return FaultSet{std::move(ids)};
}

bool forest_sparse(const std::vector<std::uint64_t>& sorted_ids, std::uint64_t n_roots,
                   int height, int branching) {
  if (height < 0) throw std::invalid_argument("forest_sparse: height must be >= 0");
  if (branching < 1) throw std::invalid_argument("forest_sparse: branching must be >= 1");
  for (std::size_t i = 1; i < sorted_ids.size(); ++i)
    if (sorted_ids[i] <= sorted_ids[i - 1])
      throw std::invalid_argument("forest_sparse: ids must be sorted and distinct");
  const std::uint64_t width = ipow_checked(branching, height);
  if (!sorted_ids.empty() && sorted_ids.back() >= n_roots * width)
    throw std::invalid_argument("forest_sparse: id outside forest");

  auto it = sorted_ids.begin();
  while (it != sorted_ids.end()) {
    const std::uint64_t root = *it / width;
    const std::uint64_t lo = root * width;
    auto root_end = std::lower_bound(it, sorted_ids.end(), lo + width);
    if (!range_sparse(it, root_end, lo, height, width, branching, kIdentityProj)) return false;
    it = root_end;
  }
  return true;
}

bool is_sparse(const FaultSet& faults, const CircuitLayout& layout, int level) {
  if (level < 0 || level > layout.level)
    throw std::invalid_argument("is_sparse: level must lie in [0, layout.level]");
  const std::uint64_t n_rects =
      layout.total_leaves() / ipow_checked(layout.code.locations_per_rectangle, level);
  return forest_sparse(faults.faulty_leaves, n_rects, level, layout.code.locations_per_rectangle);
}

PhaseSchedule make_phase_schedule(const FaultSet& faults, std::vector<FaultPhase> phases) {
  if (phases.size() != faults.faulty_leaves.size())
    throw std::invalid_argument("make_phase_schedule: every fault needs exactly one phase label");
  return PhaseSchedule{std::move(phases)};
}

std::uint64_t BlockErrorState::total_errors() const {
  std::uint64_t n = 0;
  for (const auto& block : errored_qubits) n += block.size();
  return n;
}

namespace {

struct PhasedFault {
  std::uint64_t id = 0;  // root-local rectangle-leaf id
  FaultPhase phase = FaultPhase::PreCorrection;
};

using FaultIter = std::vector<PhasedFault>::const_iterator;

constexpr auto kFaultProj = [](const PhasedFault& f) { return f.id; };

struct PropagateCtx {
  const CodeModel* code = nullptr;
  int root = 0;
  std::vector<FailedBlock>* failed = nullptr;
};

std::vector<std::uint64_t> all_qubits(std::uint64_t lo, std::uint64_t width) {
  std::vector<std::uint64_t> out(width);
  for (std::uint64_t i = 0; i < width; ++i) out[i] = lo + i;
  return out;
}

// Works one rectangle of height h.  `faults` are root-local leaf ids inside
// [rect_lo, rect_lo + A_C^h); `incoming` are sorted root-local qubit ids
// inside [block_lo, block_lo + m^h).  Returns the block's errored qubits at
// the end of the rectangle.
std::vector<std::uint64_t> process_rect(PropagateCtx& ctx, int h, FaultIter f_first,
                                        FaultIter f_last, std::uint64_t rect_lo,
                                        std::vector<std::uint64_t> incoming,
                                        std::uint64_t block_lo) {
  const int m = ctx.code->qubits_per_block;
  const int a_c = ctx.code->locations_per_rectangle;
  const std::uint64_t block_width = ipow_checked(m, h);

  if (h == 0) {
    // Bare location: no correction step; a fault corrupts its qubit.
    if (f_first != f_last) return {block_lo};
    return incoming;
  }

  const std::uint64_t child_block_width = block_width / m;
  const std::uint64_t child_rect_width = ipow_checked(a_c, h) / a_c;

  std::vector<std::vector<std::uint64_t>> content(m);
  for (std::uint64_t id : incoming)
    content[(id - block_lo) / child_block_width].push_back(id);

  struct ChildRect {
    FaultIter first, last;
    bool bad = false;
  };
  std::vector<ChildRect> children(a_c);
  FaultIter it = f_first;
  for (int c = 0; c < a_c; ++c) {
    const std::uint64_t child_lo = rect_lo + c * child_rect_width;
    FaultIter child_end =
        std::lower_bound(it, f_last, child_lo + child_rect_width,
                         [](const PhasedFault& f, std::uint64_t v) { return f.id < v; });
    children[c].first = it;
    children[c].last = child_end;
    children[c].bad = !range_sparse(it, child_end, child_lo, h - 1, child_rect_width, a_c,
                                    kFaultProj);
    it = child_end;
  }

  // Only the 1-rectangle level distinguishes phases: a pre-correction fault
  // damages its designated qubit before the leading correction step, so it
  // joins the incoming errors there.  Deeper child rectangles all run after
  // this rectangle's correction step.
  std::vector<bool> runs_after_ec(a_c, true);
  if (h == 1) {
    for (int c = 0; c < a_c; ++c) {
      if (children[c].first == children[c].last) continue;
      if (children[c].first->phase == FaultPhase::PreCorrection) {
        runs_after_ec[c] = false;
        auto& sub = content[c % m];  // single-qubit sub-block
        if (sub.empty()) sub.push_back(block_lo + c % m);
      }
    }
  }

  // The correction step absorbs the accumulated errors unless the corrupted
  // (non-sparse) sub-blocks exceed the code's capacity, in which case the
  // whole block fails.
  int corrupted_sub_blocks = 0;
  for (int b = 0; b < m; ++b) {
    const std::uint64_t sub_lo = block_lo + b * child_block_width;
    if (!range_sparse(content[b].begin(), content[b].end(), sub_lo, h - 1, child_block_width, m,
                      kIdentityProj))
      ++corrupted_sub_blocks;
  }
  if (corrupted_sub_blocks > ctx.code->corrects) {
    ctx.failed->push_back({ctx.root, h, block_lo / block_width});
    return all_qubits(block_lo, block_width);
  }

  for (auto& sub : content) sub.clear();  // correction absorbed the errors

  for (int c = 0; c < a_c; ++c) {
    if (!runs_after_ec[c]) continue;
    const int b = c % m;
    const std::uint64_t sub_lo = block_lo + b * child_block_width;
    if (children[c].bad) {
      content[b] = all_qubits(sub_lo, child_block_width);
      if (h > 1) ctx.failed->push_back({ctx.root, h - 1, sub_lo / child_block_width});
    } else if (children[c].first != children[c].last || !content[b].empty()) {
      content[b] = process_rect(ctx, h - 1, children[c].first, children[c].last,
                                rect_lo + c * child_rect_width, std::move(content[b]), sub_lo);
    }
  }

  std::vector<std::uint64_t> out;
  for (const auto& sub : content) out.insert(out.end(), sub.begin(), sub.end());
  return out;
}

}  // namespace

BlockErrorState propagate_errors(const CircuitLayout& layout, const FaultSet& faults,
                                 const PhaseSchedule& schedule) {
  BlockErrorState empty;
  empty.base_blocks = layout.base_locations;
  empty.level = layout.level;
  empty.qubits_per_block = layout.code.qubits_per_block;
  empty.errored_qubits.assign(layout.base_locations, {});
  return propagate_errors(layout, faults, schedule, empty);
}

BlockErrorState propagate_errors(const CircuitLayout& layout, const FaultSet& faults,
                                 const PhaseSchedule& schedule, const BlockErrorState& incoming) {
  if (schedule.phases.size() != faults.faulty_leaves.size())
    throw std::invalid_argument("propagate_errors: every fault needs an assigned phase");
  if (incoming.base_blocks != layout.base_locations || incoming.level != layout.level ||
      incoming.qubits_per_block != layout.code.qubits_per_block ||
      incoming.errored_qubits.size() != static_cast<std::size_t>(layout.base_locations))
    throw std::invalid_argument("propagate_errors: incoming state does not match layout");

  const std::uint64_t rect_width = layout.leaves_per_rectangle();
  const std::uint64_t block_width = layout.qubits_per_top_block();

  BlockErrorState out;
  out.base_blocks = layout.base_locations;
  out.level = layout.level;
  out.qubits_per_block = layout.code.qubits_per_block;
  out.errored_qubits.assign(layout.base_locations, {});

  std::size_t cursor = 0;
  for (int root = 0; root < layout.base_locations; ++root) {
    const std::uint64_t lo = static_cast<std::uint64_t>(root) * rect_width;
    std::vector<PhasedFault> local;
    while (cursor < faults.faulty_leaves.size() && faults.faulty_leaves[cursor] < lo + rect_width) {
      local.push_back({faults.faulty_leaves[cursor] - lo, schedule.phases[cursor]});
      ++cursor;
    }

    const std::vector<std::uint64_t>& in = incoming.errored_qubits[root];
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (in[i] >= block_width)
        throw std::invalid_argument("propagate_errors: incoming qubit id outside block");
      if (i > 0 && in[i] <= in[i - 1])
        throw std::invalid_argument("propagate_errors: incoming qubit ids must be sorted");
    }

    PropagateCtx ctx{&layout.code, root, &out.failed_blocks};
    out.errored_qubits[root] =
        process_rect(ctx, layout.level, local.cbegin(), local.cend(), 0, in, 0);
  }
  return out;
}

bool state_is_sparse(const BlockErrorState& state, const CircuitLayout& layout) {
  for (const auto& block : state.errored_qubits)
    if (!forest_sparse(block, 1, layout.level, layout.code.qubits_per_block)) return false;
  return true;
}

FaultSet sample_sparse_fault_set(const CircuitLayout& layout, Rng& rng,
                                 double mean_faults_per_rectangle) {
  if (mean_faults_per_rectangle < 0.0)
    throw std::invalid_argument("sample_sparse_fault_set: mean must be >= 0");
  const std::uint64_t total = layout.total_leaves();
  const double p =
      std::min(1.0, mean_faults_per_rectangle / static_cast<double>(layout.leaves_per_rectangle()));

  for (int attempt = 0; attempt < 1000000; ++attempt) {
    std::vector<std::uint64_t> ids;
    for (std::uint64_t leaf = 0; leaf < total; ++leaf)
      if (rng.uniform() < p) ids.push_back(leaf);
    FaultSet fs{std::move(ids)};
    if (is_sparse(fs, layout, layout.level)) return fs;
  }
  throw std::runtime_error("sample_sparse_fault_set: rejection sampling cap exceeded");
}

PhaseSchedule random_phase_schedule(const FaultSet& faults, Rng& rng) {
  std::vector<FaultPhase> phases(faults.faulty_leaves.size());
  for (auto& ph : phases)
    ph = rng.uniform() < 0.5 ? FaultPhase::PreCorrection : FaultPhase::DuringCorrection;
  return PhaseSchedule{std::move(phases)};
}

SparsePropagationReport sparse_propagation_check(const CircuitLayout& layout, int n_trials,
                                                 std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("sparse_propagation_check: need n_trials >= 1");
  if (layout.level < 1 || layout.level > 3)
    throw std::invalid_argument(
        "sparse_propagation_check: desk-scale check covers levels 1 through 3");
  const double densities[] = {0.2, 1.5, 4.0};

  Rng root(seed);
  SparsePropagationReport report;
  report.trials = n_trials;
  for (int t = 0; t < n_trials; ++t) {
    Rng rng = root.substream(static_cast<std::uint64_t>(t));
    const double density = densities[t % 3];

    const FaultSet f1 = sample_sparse_fault_set(layout, rng, density);
    const PhaseSchedule p1 = random_phase_schedule(f1, rng);
    const BlockErrorState s1 = propagate_errors(layout, f1, p1);

    const FaultSet f2 = sample_sparse_fault_set(layout, rng, density);
    const PhaseSchedule p2 = random_phase_schedule(f2, rng);
    const BlockErrorState s2 = propagate_errors(layout, f2, p2, s1);

    if (!state_is_sparse(s1, layout) || !state_is_sparse(s2, layout)) ++report.violations;
  }
  return report;
}

}  // namespace ftnm
