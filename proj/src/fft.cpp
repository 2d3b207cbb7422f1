#include "opharm/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "opharm/error.hpp"

namespace opharm::fft {

namespace {

using PlanKey = std::tuple<int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const GridSpec& grid, int howmany, Direction dir) {
    const PlanKey key{grid.d, grid.N, howmany, static_cast<int>(dir)};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(grid.d), grid.N);
    std::vector<cd> scratch(grid.num_points() * static_cast<std::size_t>(howmany));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_many_dft(grid.d, dims.data(), howmany, buf, nullptr, howmany, 1, buf, nullptr,
                                        howmany, 1, static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(const GridSpec& grid, int howmany, std::span<cd> data, Direction dir) {
  if (howmany < 1 || data.size() != grid.num_points() * static_cast<std::size_t>(howmany))
    throw_shape("fft buffer does not match grid");
  fftw_plan plan = cache().get(grid, howmany, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace opharm::fft
