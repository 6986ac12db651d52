#include "mmoc/backend.hpp"

#include "mmoc/parallel.hpp"

namespace mmoc {

std::vector<Eigen::MatrixXd> SolverBackend::couplings(const Control& u,
                                                      const std::vector<int>& indices) const {
  std::vector<Eigen::MatrixXd> out(indices.size());
  parallel_for(
      static_cast<int>(indices.size()),
      [&](int i) { out[static_cast<std::size_t>(i)] = cell_coupling(u, indices[static_cast<std::size_t>(i)]); },
      threads_);
  return out;
}

}  // namespace mmoc
