#include "tenrec/nonlocal.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <utility>

#include "tenrec/parallel.hpp"

namespace tenrec {

namespace {

std::vector<Index> grid_offsets(Index extent, Index p, Index stride) {
  std::vector<Index> offsets;
  for (Index t = 0; t + p <= extent; t += stride) offsets.push_back(t);
  if (offsets.empty() || offsets.back() != extent - p) {
    offsets.push_back(extent - p);
  }
  return offsets;
}

double patch_distance_sq(const Tensor3& x, const PatchIndex& a,
                         const PatchIndex& b) {
  const Index p = a.size;
  double acc = 0.0;
  for (Index k = 0; k < x.n3(); ++k) {
    for (Index c = 0; c < p; ++c) {
      for (Index r = 0; r < p; ++r) {
        const double d =
            x(a.top + r, a.left + c, k) - x(b.top + r, b.left + c, k);
        acc += d * d;
      }
    }
  }
  return acc;
}

}  // namespace

void GroupingConfig::validate() const {
  std::ostringstream msg;
  if (p < 2) {
    msg << "patch size must be at least 2, got " << p;
  } else if (m < 1) {
    msg << "group size must be at least 1, got " << m;
  } else if (effective_stride() < 1 || effective_stride() > p) {
    msg << "stride " << effective_stride() << " outside [1, " << p << "]";
  } else {
    return;
  }
  throw InvalidConfig(msg.str());
}

std::vector<PatchIndex> extract_patches(const Tensor3& x,
                                        const GroupingConfig& cfg) {
  cfg.validate();
  if (cfg.p > std::min(x.n1(), x.n2())) {
    std::ostringstream msg;
    msg << "patch size " << cfg.p << " exceeds spatial extent " << x.n1()
        << "x" << x.n2();
    throw PatchTooLarge(msg.str());
  }
  const std::vector<Index> tops =
      grid_offsets(x.n1(), cfg.p, cfg.effective_stride());
  const std::vector<Index> lefts =
      grid_offsets(x.n2(), cfg.p, cfg.effective_stride());
  std::vector<PatchIndex> out;
  out.reserve(tops.size() * lefts.size());
  for (Index t : tops) {
    for (Index l : lefts) out.push_back({t, l, cfg.p});
  }
  return out;
}

std::vector<PatchIndex> find_similar(const Tensor3& x, const PatchIndex& ref,
                                     const std::vector<PatchIndex>& all,
                                     Index m) {
  if (static_cast<Index>(all.size()) < m) {
    std::ostringstream msg;
    msg << "need " << m << " patches, only " << all.size() << " available";
    throw NotEnoughPatches(msg.str());
  }
  struct Scored {
    double dist;
    PatchIndex idx;
  };
  std::vector<Scored> scored;
  scored.reserve(all.size());
  for (const PatchIndex& cand : all) {
    if (cand == ref) continue;
    scored.push_back({patch_distance_sq(x, ref, cand), cand});
  }
  std::sort(scored.begin(), scored.end(),
            [](const Scored& a, const Scored& b) {
              if (a.dist != b.dist) return a.dist < b.dist;
              if (a.idx.top != b.idx.top) return a.idx.top < b.idx.top;
              return a.idx.left < b.idx.left;
            });
  std::vector<PatchIndex> out;
  out.reserve(static_cast<std::size_t>(m));
  out.push_back(ref);
  for (Index i = 0; i + 1 < m; ++i) {
    out.push_back(scored[static_cast<std::size_t>(i)].idx);
  }
  return out;
}

Tensor3 build_group_tensor(const Tensor3& x,
                           const std::vector<PatchIndex>& members,
                           GroupMethod method) {
  if (members.empty()) throw NotEnoughPatches("empty member list");
  const Index p = members.front().size;
  const auto m = static_cast<Index>(members.size());
  for (const PatchIndex& idx : members) {
    if (idx.size != p || idx.top < 0 || idx.left < 0 ||
        idx.top + p > x.n1() || idx.left + p > x.n2()) {
      std::ostringstream msg;
      msg << "patch (" << idx.top << ", " << idx.left << ", size " << idx.size
          << ") invalid for " << x.n1() << "x" << x.n2();
      throw ShapeMismatch(msg.str());
    }
  }
  const Index n3 = x.n3();
  if (method == GroupMethod::StackMode3) {
    Tensor3 g(p, p, m * n3);
    for (Index t = 0; t < m; ++t) {
      const PatchIndex& idx = members[static_cast<std::size_t>(t)];
      for (Index k = 0; k < n3; ++k) {
        for (Index c = 0; c < p; ++c) {
          for (Index r = 0; r < p; ++r) {
            g(r, c, t * n3 + k) = x(idx.top + r, idx.left + c, k);
          }
        }
      }
    }
    return g;
  }
  Tensor3 g(m, p * p, n3);
  for (Index t = 0; t < m; ++t) {
    const PatchIndex& idx = members[static_cast<std::size_t>(t)];
    for (Index k = 0; k < n3; ++k) {
      for (Index c = 0; c < p; ++c) {
        for (Index r = 0; r < p; ++r) {
          g(t, r + c * p, k) = x(idx.top + r, idx.left + c, k);
        }
      }
    }
  }
  return g;
}

Tensor3 aggregate(const std::vector<PatchGroup>& groups,
                  const std::vector<Tensor3>& recovered, Index n1, Index n2,
                  Index n3) {
  if (groups.size() != recovered.size()) {
    throw ShapeMismatch("group/recovered list length mismatch");
  }
  Tensor3 sum(n1, n2, n3);
  Tensor3 count(n1, n2, n3);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const PatchGroup& group = groups[gi];
    const Tensor3& rec = recovered[gi];
    const Index p = group.reference.size;
    const auto m = static_cast<Index>(group.members.size());
    const bool mode3 = group.method == GroupMethod::StackMode3;
    const bool shape_ok =
        mode3 ? (rec.n1() == p && rec.n2() == p && rec.n3() == m * n3)
              : (rec.n1() == m && rec.n2() == p * p && rec.n3() == n3);
    if (!shape_ok) {
      std::ostringstream msg;
      msg << "recovered tensor (" << rec.n1() << ", " << rec.n2() << ", "
          << rec.n3() << ") does not match group construction";
      throw ShapeMismatch(msg.str());
    }
    for (Index t = 0; t < m; ++t) {
      const PatchIndex& idx = group.members[static_cast<std::size_t>(t)];
      for (Index k = 0; k < n3; ++k) {
        for (Index c = 0; c < p; ++c) {
          for (Index r = 0; r < p; ++r) {
            const double v = mode3 ? rec(r, c, t * n3 + k)
                                   : rec(t, r + c * p, k);
            sum(idx.top + r, idx.left + c, k) += v;
            count(idx.top + r, idx.left + c, k) += 1.0;
          }
        }
      }
    }
  }
  Tensor3 out(n1, n2, n3);
  for (Index k = 0; k < n3; ++k) {
    for (Index j = 0; j < n2; ++j) {
      for (Index i = 0; i < n1; ++i) {
        if (count(i, j, k) == 0.0) {
          std::ostringstream msg;
          msg << "position (" << i << ", " << j << ", " << k
              << ") received no patch";
          throw UncoveredPixels(msg.str());
        }
        out(i, j, k) = sum(i, j, k) / count(i, j, k);
      }
    }
  }
  return out;
}

Decomposition nn_trpca(const Tensor3& x, const GroupingConfig& gcfg,
                       const SolverConfig& scfg) {
  gcfg.validate();
  scfg.validate();
  const std::vector<PatchIndex> grid = extract_patches(x, gcfg);

  Index m = gcfg.m;
  if (static_cast<Index>(grid.size()) < m) {
    m = static_cast<Index>(grid.size());
    std::cerr << "nn_trpca: clamping group size to the " << m
              << " available patches\n";
  }

  const auto n_groups = static_cast<Index>(grid.size());
  std::vector<PatchGroup> groups(static_cast<std::size_t>(n_groups));
  std::vector<Tensor3> recovered(static_cast<std::size_t>(n_groups));
  std::vector<SolverReport> reports(static_cast<std::size_t>(n_groups));

  parallel_for(n_groups, [&](Index gi) {
    const auto slot = static_cast<std::size_t>(gi);
    const PatchIndex& ref = grid[slot];
    try {
      PatchGroup group;
      group.reference = ref;
      group.members = find_similar(x, ref, grid, m);
      group.method = gcfg.method;
      group.group_tensor = build_group_tensor(x, group.members, gcfg.method);
      Decomposition dec = n_trpca(group.group_tensor, scfg);
      recovered[slot] = std::move(dec.low_rank);
      reports[slot] = std::move(dec.report);
      groups[slot] = std::move(group);
    } catch (const NumericalFailure& err) {
      std::ostringstream msg;
      msg << "group at (" << ref.top << ", " << ref.left
          << "): " << err.what();
      throw NumericalFailure(msg.str());
    }
  });

  Decomposition out;
  out.low_rank = aggregate(groups, recovered, x.n1(), x.n2(), x.n3());
  out.sparse = x - out.low_rank;

  out.report.converged = true;
  for (const SolverReport& rep : reports) {
    out.report.iterations = std::max(out.report.iterations, rep.iterations);
    out.report.converged = out.report.converged && rep.converged;
    out.report.residual_L = std::max(out.report.residual_L, rep.residual_L);
    out.report.residual_E = std::max(out.report.residual_E, rep.residual_E);
    out.report.residual_primal =
        std::max(out.report.residual_primal, rep.residual_primal);
    out.report.kkt_feasibility =
        std::max(out.report.kkt_feasibility, rep.kkt_feasibility);
  }
  return out;
}

}  // namespace tenrec
