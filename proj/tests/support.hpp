#pragma once

#include <random>
#include <string>
#include <vector>

#include "hhls/dfg.hpp"

namespace hhls::test {

// Random DAG with `ops` operations drawn from `types`; each op reads up to two
// earlier values (inputs or ops).
inline Dfg random_dag(std::mt19937_64& rng, int ops, const std::vector<OpType>& types,
                      int inputs = 2, double edge_prob = 0.35) {
  Dfg g;
  for (int i = 0; i < inputs; ++i) g.inputs.push_back(i);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_type(0, types.size() - 1);
  for (int i = 0; i < ops; ++i) {
    Operation op{inputs + i, types[pick_type(rng)], {}};
    const int avail = inputs + i;
    for (int slot = 0; slot < 2; ++slot) {
      const bool from_op = i > 0 && coin(rng) < edge_prob;
      std::uniform_int_distribution<int> which(from_op ? inputs : 0, from_op ? avail - 1 : inputs - 1);
      op.operands.push_back(which(rng));
    }
    g.ops.push_back(op);
  }
  g.outputs.push_back(inputs + ops - 1);
  return g;
}

inline Dfg chain(int n, OpType type = OpType::Add) {
  Dfg g;
  g.inputs = {0};
  for (int i = 0; i < n; ++i) g.ops.push_back({1 + i, type, {i}});
  g.outputs = {n};
  return g;
}

inline Dfg independent(int n, OpType type = OpType::Add) {
  Dfg g;
  g.inputs = {0, 1};
  for (int i = 0; i < n; ++i) g.ops.push_back({2 + i, type, {0, 1}});
  return g;
}

}  // namespace hhls::test

#include "hhls/io.hpp"
#include "hhls/psm.hpp"
#include "hhls/psm_text.hpp"

namespace hhls::test {

inline const std::string kFixtureDir = HHLS_FIXTURES;

inline PsmModule fixture_module(const std::vector<std::string>& names) {
  std::vector<std::string> paths;
  for (const auto& n : names) paths.push_back(kFixtureDir + "/psm/" + n);
  return load_module_files(paths);
}

inline std::vector<Stimulus> fixture_stimulus(const std::string& name) {
  return parse_stimulus(read_file(kFixtureDir + "/stim/" + name));
}

}  // namespace hhls::test
