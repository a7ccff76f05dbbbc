#include "nodalfm/catalog.hpp"

#include <functional>

namespace nodalfm {

std::vector<std::vector<int>> band_shapes(int max_n) {
  std::vector<std::vector<int>> out;
  Pairs runs;
  std::function<void(int)> grow = [&](int used) {
    if (!runs.empty() && !is_periodic(runs)) {
      std::vector<int> d;
      for (auto [a, b] : runs) {
        d.push_back(1);
        d.insert(d.end(), a - 1, 0);
        d.push_back(-1);
        d.insert(d.end(), b - 1, 0);
      }
      out.push_back(d);
    }
    for (int a = 1; used + a + 1 <= max_n; ++a)
      for (int b = 1; used + a + b <= max_n; ++b) {
        runs.push_back({a, b});
        grow(used + a + b);
        runs.pop_back();
      }
  };
  grow(0);
  return out;
}

std::vector<std::vector<int>> string_shapes(int max_n) {
  std::vector<std::vector<int>> out;
  // sequences over {-1,0,1} whose nonzero entries alternate -1,1,...,-1
  std::vector<int> d;
  std::function<void(int)> grow = [&](int expect) {
    if (expect == 1) out.push_back(d);  // last nonzero was -1
    if (static_cast<int>(d.size()) == max_n) return;
    d.push_back(0);
    grow(expect);
    d.back() = expect;
    grow(-expect);
    d.pop_back();
  };
  grow(-1);
  return out;
}

}  // namespace nodalfm
