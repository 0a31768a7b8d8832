#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "confkern/svm.hpp"
#include "confkern/textprep.hpp"

namespace confkern {

/// Synthetic nonlinear-boundary generators for the two replication tasks:
///   Sin   region [-0.5, 0.5]^2, boundary y = 0.5 sin(2 pi x)
///   Bump  region [-1, 1]^2,     boundary y = 2 exp(-4 x^2) - 1
enum class Boundary { Sin, Bump };

struct SyntheticSpec {
    Boundary boundary = Boundary::Sin;
    int n_train = 100;
    int n_test = 10000;
    std::uint64_t seed = 0;
};

struct SyntheticData {
    TrainSet train;
    TrainSet test;
};

double boundary_value(Boundary b, double x);
double region_halfwidth(Boundary b);

/// Uniform points over the region; label +1 iff y >= boundary(x) (exact ties
/// go to +1). Train and test are independent draws; identical seeds give
/// bit-identical datasets on every platform.
SyntheticData gen_synthetic(const SyntheticSpec& spec);

/// Binary task over a loaded document collection, as document indices plus
/// labels; embedding happens separately.
struct BinaryTask {
    std::string name;
    std::vector<std::size_t> doc_indices;
    std::vector<int> labels;
};

enum class TaskMode { OneVsRest, OneVsOne };

/// OneVsRest: positive topic vs everything else. OneVsOne: positive vs
/// negative topic only; documents carrying both topics are excluded.
/// Throws DataError when a class comes out empty.
BinaryTask make_task(std::span<const Document> docs, TaskMode mode,
                     const std::string& positive, const std::string& negative = "");

TrainSet materialize(const BinaryTask& task, std::span<const SparseVector> embedded);

}  // namespace confkern
