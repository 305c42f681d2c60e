#pragma once

// Relational graph convolution, one layer:
//
//   h_i' = act( sum_r sum_{j in N_r(i)} (1 / c_{i,r}) W_r h_j + W_0 h_i )
//
// N_r(i) are the in-neighbours of i under relation r (messages follow the
// stored edge direction). c_{i,r} is |N_r(i)| or 1.

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "tempograph/fusion.hpp"
#include "tempograph/relation.hpp"

namespace tempograph {

enum class Activation { kIdentity, kRelu };
enum class Normalizer { kCount, kOne };

struct RelConvLayer {
  std::array<Eigen::MatrixXd, kRelationCount> relation_weights;  // d_out x d_in each
  Eigen::MatrixXd self_weight;                                   // d_out x d_in
  Activation activation = Activation::kRelu;
  Normalizer normalizer = Normalizer::kCount;

  std::size_t input_dim() const { return static_cast<std::size_t>(self_weight.cols()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(self_weight.rows()); }
};

// All weights zero, with the given shape.
RelConvLayer make_layer(std::size_t d_in, std::size_t d_out, Activation act = Activation::kRelu,
                        Normalizer norm = Normalizer::kCount);

// One row per export node, in export node order.
using NodeStates = Eigen::MatrixXd;

// Throws DimensionMismatch if weight shapes disagree, the state matrix does
// not match (nodes x d_in), or an edge references a node missing from the
// export.
NodeStates forward(const RelConvLayer& layer, const GnnExport& graph, const NodeStates& h);

// Single-threaded reference for the parallel forward.
NodeStates forward_serial(const RelConvLayer& layer, const GnnExport& graph, const NodeStates& h);

}  // namespace tempograph
