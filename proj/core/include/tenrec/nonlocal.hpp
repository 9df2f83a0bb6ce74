#pragma once

#include <optional>
#include <vector>

#include "tenrec/solvers.hpp"
#include "tenrec/tensor.hpp"

namespace tenrec {

/// Top-left corner and spatial size of one square full-depth patch.
struct PatchIndex {
  Index top = 0;
  Index left = 0;
  Index size = 0;

  friend bool operator==(const PatchIndex& a, const PatchIndex& b) {
    return a.top == b.top && a.left == b.left && a.size == b.size;
  }
};

enum class GroupMethod {
  StackMode3,       // concatenate the m patches along mode 3: (p, p, m*n3)
  UnfoldStackMode1  // unfold each patch to p^2 x n3, stack along mode 1:
                    // (m, p^2, n3)
};

struct GroupingConfig {
  Index p = 10;
  Index m = 100;
  /// Reference-grid step. Unset means p/2 (at least 1).
  std::optional<Index> stride;
  GroupMethod method = GroupMethod::UnfoldStackMode1;

  Index effective_stride() const {
    if (stride) return *stride;
    return p / 2 > 0 ? p / 2 : 1;
  }

  /// Throws InvalidConfig unless p >= 2, m >= 1, 1 <= stride <= p.
  void validate() const;
};

/// A reference patch with its similar patches (reference first, then
/// ascending distance) and the tensor they were stacked into.
struct PatchGroup {
  PatchIndex reference;
  std::vector<PatchIndex> members;
  Tensor3 group_tensor;
  GroupMethod method = GroupMethod::UnfoldStackMode1;
};

/// Reference grid with the configured stride, clamped so patches flush with
/// the right and bottom borders are always included; every pixel is covered.
std::vector<PatchIndex> extract_patches(const Tensor3& x,
                                        const GroupingConfig& cfg);

/// The reference followed by the m-1 candidates nearest in Frobenius
/// distance over the full-depth patch; ties break by (top, left).
std::vector<PatchIndex> find_similar(const Tensor3& x, const PatchIndex& ref,
                                     const std::vector<PatchIndex>& all,
                                     Index m);

Tensor3 build_group_tensor(const Tensor3& x,
                           const std::vector<PatchIndex>& members,
                           GroupMethod method);

/// Scatters every recovered patch back to its source position, averaging
/// overlaps. Throws UncoveredPixels if any position receives no patch.
Tensor3 aggregate(const std::vector<PatchGroup>& groups,
                  const std::vector<Tensor3>& recovered, Index n1, Index n2,
                  Index n3);

/// Nonlocal pipeline: extract -> group -> per-group low-rank/sparse solve ->
/// aggregate the low-rank parts. The sparse component is x minus the
/// aggregate. Per-group solves run in parallel (see thread_budget);
/// aggregation order is fixed, so output is run-to-run identical.
Decomposition nn_trpca(const Tensor3& x, const GroupingConfig& gcfg,
                       const SolverConfig& scfg);

}  // namespace tenrec
