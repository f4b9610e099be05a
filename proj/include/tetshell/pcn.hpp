// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_PCN_HPP
#define TETSHELL_PCN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tetshell/hierarchy.hpp"
#include "tetshell/tetra_grid.hpp"
#include "tetshell/tsdf.hpp"

namespace tetshell {

// Sparse connection pattern of one partially-connected layer, CSR over output
// nodes. adj(n) = indices[offsets[n] .. offsets[n+1]) lists the input nodes
// feeding output node n, sorted ascending, no duplicates. The reverse view
// (input node -> positions of the forward entries that read it, in forward
// order) drives the deterministic input-gradient scatter; build_reverse() is
// called by every constructor path in this module, call it yourself only on
// hand-assembled lists.
struct AdjacencyList {
    uint32_t n_in = 0, n_out = 0;
    std::vector<uint32_t> offsets;  // n_out + 1
    std::vector<uint32_t> indices;  // Σ m(n) entries

    std::vector<uint32_t> rev_offsets;  // n_in + 1
    std::vector<uint32_t> rev_slot;     // global forward slot, ascending per input
    std::vector<uint32_t> rev_node;     // output node of that slot

    uint32_t degree(uint32_t n) const { return offsets[n + 1] - offsets[n]; }
    std::size_t edge_count() const { return indices.size(); }
    void build_reverse();

    // FNV-1a over dims, offsets and indices; pinned in the weight container so
    // a reloaded network can prove it rebuilt the same connectivity.
    uint64_t content_hash() const;
};

// k nearest coarse (input) nodes for every fine (output) node. When labels
// are given and part_restricted is set, candidates are limited to coarse
// nodes of the output node's part; parts with fewer than k coarse nodes fall
// back to the global candidate set. Distance ties go to the lower coarse
// index.
AdjacencyList build_adjacency(const std::vector<Vec3>& coarse,
                              const std::vector<uint16_t>& coarse_labels,
                              const std::vector<Vec3>& fine,
                              const std::vector<uint16_t>& fine_labels, uint32_t k,
                              bool part_restricted = true);

// Adjacency feeding hierarchy level `fine_level` from level `fine_level + 1`.
AdjacencyList level_adjacency(const TetraGrid& grid, const SummitHierarchy& h,
                              std::size_t fine_level, uint32_t k, bool part_restricted);

enum class Activation : uint8_t { linear = 0, relu = 1 };

// One partially-connected layer. Features are node-major (node, channel);
// weights are one C_in × C_out block per adjacency edge, laid out in
// canonical (node, slot, c_in, c_out) order. At C_in = C_out = 1 the forward
// pass is exactly f_out = σ(A₂ (A₁ f_in ∘ W)) for the gather matrix A₁ and
// block-sum matrix A₂ encoded by the adjacency.
struct PcnLayer {
    AdjacencyList adjacency;
    uint32_t c_in = 1, c_out = 1;
    Activation activation = Activation::relu;
    std::vector<double> weights;

    std::size_t weight_count() const { return adjacency.edge_count() * c_in * c_out; }
};

// Dense latent -> coarsest-level bridge, row-major (out, in) weights + bias.
struct BridgeLayer {
    uint32_t in_dim = 0, out_dim = 0;
    Activation activation = Activation::relu;
    std::vector<double> weights;
    std::vector<double> bias;
};

std::vector<double> pcn_forward(const PcnLayer& layer, const std::vector<double>& f_in);
// Exact gradients of pcn_forward; ReLU subgradient at 0 is 0. grad_w is in
// canonical weight order.
void pcn_backward(const PcnLayer& layer, const std::vector<double>& f_in,
                  const std::vector<double>& grad_out, std::vector<double>& grad_f_in,
                  std::vector<double>& grad_w);

std::vector<double> bridge_forward(const BridgeLayer& b, const std::vector<double>& latent);
void bridge_backward(const BridgeLayer& b, const std::vector<double>& latent,
                     const std::vector<double>& grad_out, std::vector<double>& grad_latent,
                     std::vector<double>& grad_w, std::vector<double>& grad_bias);

// Decoder: bridge into the coarsest hierarchy level, then one partially-
// connected layer per level transition down to level 0 at one channel.
struct PcnNetwork {
    BridgeLayer bridge;
    std::vector<PcnLayer> layers;  // coarsest -> level 0

    // Adjacency provenance, recorded in the weight container.
    std::string hierarchy_ref;
    uint32_t knn = 5;
    bool part_restricted = true;

    std::size_t output_size() const {
        return layers.empty() ? bridge.out_dim : layers.back().adjacency.n_out;
    }
};

struct NetworkConfig {
    uint32_t latent_dim = 256;
    std::vector<uint32_t> channels;  // per hierarchy level; channels[0] must be 1
    uint32_t k = 5;
    bool part_restricted = true;
};

// channels = 1, 2, 4, 8, 8, ... (level 0 upward), latent 256.
NetworkConfig default_network_config(std::size_t level_count);

// He-uniform init (fan-in = in_dim for the bridge, m(n)·C_in per node for
// partially-connected layers), zero bias, fixed seed. Hidden activations
// ReLU; the layer producing level 0 is linear.
PcnNetwork build_network(const TetraGrid& grid, const SummitHierarchy& h,
                         const NetworkConfig& cfg, uint64_t seed);

struct LayerParamReport {
    std::string name;
    std::size_t params = 0, bytes = 0;        // 4 bytes per parameter
    std::size_t fc_params = 0, fc_bytes = 0;  // dense equivalent of the same mapping
};
struct ParamReport {
    std::vector<LayerParamReport> layers;
    std::size_t total_params = 0, total_bytes = 0;
    std::size_t fc_total_params = 0, fc_total_bytes = 0;
};

LayerParamReport count_layer(const PcnLayer& layer, const std::string& name);
ParamReport count_parameters(const PcnNetwork& net);
std::string param_report_table(const ParamReport& report);

struct TrainOptions {
    uint32_t epochs = 500;
    uint32_t batch_size = 5;
    double learning_rate = 1e-3;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    uint64_t seed = 1;
    double stop_loss = 0.0;  // stop once an epoch's mean MSE drops below; 0 = run all epochs
};

struct TrainHistory {
    std::vector<double> epoch_loss;  // mean per-sample MSE, one entry per epoch run
};

// Adam on summit-value MSE, minibatched with a seed-fixed shuffle each epoch.
// Bitwise reproducible for a given seed, independent of worker count.
TrainHistory train_toy(PcnNetwork& net, const std::vector<std::vector<double>>& latents,
                       const std::vector<TsdfField>& fields, const TrainOptions& opt);

// Forward pass; final values clamped to [-1, 1]. tau is metadata for the
// produced field (the network itself is pose- and tau-agnostic).
TsdfField infer(const PcnNetwork& net, const std::vector<double>& latent, double tau = 0.03);

// "TPCN" container. Adjacency is stored as a reference to the hierarchy file
// (net.hierarchy_ref) plus k and the part flag; load rebuilds it against the
// given grid and verifies the stored content hash. A relative hierarchy_ref
// is resolved against the TPCN file's directory.
void save_tpcn(const PcnNetwork& net, const std::string& path);
PcnNetwork load_tpcn(const std::string& path, const TetraGrid& grid);

}  // namespace tetshell

#endif
