// SPDX-License-Identifier: Apache-2.0

#include "tetshell/pcn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "tetshell/binary_io.hpp"
#include "tetshell/error.hpp"
#include "tetshell/kdtree.hpp"
#include "tetshell/parallel.hpp"
#include "tetshell/rng.hpp"

namespace tetshell {

// ---------------------------------------------------------------- adjacency

void AdjacencyList::build_reverse() {
    rev_offsets.assign(n_in + 1, 0);
    for (uint32_t j : indices) ++rev_offsets[j + 1];
    for (uint32_t j = 0; j < n_in; ++j) rev_offsets[j + 1] += rev_offsets[j];
    rev_slot.resize(indices.size());
    rev_node.resize(indices.size());
    std::vector<uint32_t> cursor(rev_offsets.begin(), rev_offsets.end() - 1);
    // Forward slots visited ascending, so each input's list ends up in
    // forward order — the order the input-gradient sum is specified in.
    for (uint32_t n = 0; n < n_out; ++n)
        for (uint32_t s = offsets[n]; s < offsets[n + 1]; ++s) {
            const uint32_t at = cursor[indices[s]]++;
            rev_slot[at] = s;
            rev_node[at] = n;
        }
}

uint64_t AdjacencyList::content_hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(n_in);
    mix(n_out);
    for (uint32_t v : offsets) mix(v);
    for (uint32_t v : indices) mix(v);
    return h;
}

AdjacencyList build_adjacency(const std::vector<Vec3>& coarse,
                              const std::vector<uint16_t>& coarse_labels,
                              const std::vector<Vec3>& fine,
                              const std::vector<uint16_t>& fine_labels, uint32_t k,
                              bool part_restricted) {
    if (coarse.empty() || fine.empty()) throw InputError("build_adjacency: empty node set");
    if (k == 0) throw InputError("build_adjacency: k must be >= 1");

    const bool by_part = part_restricted && coarse_labels.size() == coarse.size() &&
                         fine_labels.size() == fine.size();

    KdTree global(coarse);

    // Per-part candidate subsets, ascending coarse index so subset-local knn
    // ties resolve to the lower coarse index.
    std::map<uint16_t, std::vector<uint32_t>> parts;
    std::map<uint16_t, KdTree> part_trees;
    if (by_part) {
        for (uint32_t i = 0; i < coarse.size(); ++i)
            parts[coarse_labels[i]].push_back(i);
        for (const auto& [label, ids] : parts) {
            if (ids.size() < k) continue;  // global fallback, no tree needed
            std::vector<Vec3> pts;
            pts.reserve(ids.size());
            for (uint32_t i : ids) pts.push_back(coarse[i]);
            part_trees.emplace(label, KdTree(std::move(pts)));
        }
    }

    AdjacencyList adj;
    adj.n_in = (uint32_t)coarse.size();
    adj.n_out = (uint32_t)fine.size();
    adj.offsets.resize(fine.size() + 1, 0);

    std::vector<std::vector<uint32_t>> rows(fine.size());
    parallel_for_chunks(fine.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const std::vector<uint32_t>* subset = nullptr;
            const KdTree* tree = &global;
            if (by_part) {
                const auto it = part_trees.find(fine_labels[n]);
                if (it != part_trees.end()) {
                    tree = &it->second;
                    subset = &parts.find(fine_labels[n])->second;
                }
            }
            std::vector<uint32_t> nn = tree->knn(fine[n], k);
            if (subset)
                for (uint32_t& id : nn) id = (*subset)[id];
            std::sort(nn.begin(), nn.end());
            rows[n] = std::move(nn);
        }
    });

    for (std::size_t n = 0; n < rows.size(); ++n)
        adj.offsets[n + 1] = adj.offsets[n] + (uint32_t)rows[n].size();
    adj.indices.reserve(adj.offsets.back());
    for (const auto& row : rows) adj.indices.insert(adj.indices.end(), row.begin(), row.end());
    adj.build_reverse();
    return adj;
}

AdjacencyList level_adjacency(const TetraGrid& grid, const SummitHierarchy& h,
                              std::size_t fine_level, uint32_t k, bool part_restricted) {
    if (fine_level + 1 >= h.level_count())
        throw InputError("level_adjacency: no coarser level above the requested one");
    auto positions = [&](std::size_t level) {
        std::vector<Vec3> p;
        p.reserve(h.levels[level].size());
        for (uint32_t id : h.levels[level]) p.push_back(grid.summits[id]);
        return p;
    };
    static const std::vector<uint16_t> kNoLabels;
    const auto& coarse_labels = h.has_labels() ? h.labels[fine_level + 1] : kNoLabels;
    const auto& fine_labels = h.has_labels() ? h.labels[fine_level] : kNoLabels;
    return build_adjacency(positions(fine_level + 1), coarse_labels, positions(fine_level),
                           fine_labels, k, part_restricted);
}

// ------------------------------------------------------------------ kernels

static inline double activate(Activation a, double x) {
    return a == Activation::relu ? (x > 0.0 ? x : 0.0) : x;
}
// Subgradient of ReLU at 0 is 0.
static inline double activate_deriv(Activation a, double pre) {
    return a == Activation::relu ? (pre > 0.0 ? 1.0 : 0.0) : 1.0;
}

// Pre-activation gather-scatter: pre[n][c] = Σ_slot Σ_cin W·f, summed in
// (slot, c_in) order. Disjoint writes per output node.
static void pcn_forward_pre(const PcnLayer& L, const double* in, double* pre) {
    const AdjacencyList& A = L.adjacency;
    const uint32_t ci_n = L.c_in, co_n = L.c_out;
    parallel_for_chunks(A.n_out, [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            double* out = pre + n * co_n;
            for (uint32_t c = 0; c < co_n; ++c) out[c] = 0.0;
            for (uint32_t s = A.offsets[n]; s < A.offsets[n + 1]; ++s) {
                const double* f = in + (std::size_t)A.indices[s] * ci_n;
                const double* w = L.weights.data() + (std::size_t)s * ci_n * co_n;
                for (uint32_t ci = 0; ci < ci_n; ++ci) {
                    const double fv = f[ci];
                    for (uint32_t c = 0; c < co_n; ++c) out[c] += w[ci * co_n + c] * fv;
                }
            }
        }
    });
}

// grad_w[slot][ci][c] += f_in[ci] * grad_pre[c]; per-node slots are disjoint.
static void pcn_weight_grad_accum(const PcnLayer& L, const double* in, const double* grad_pre,
                                  double* gw) {
    const AdjacencyList& A = L.adjacency;
    const uint32_t ci_n = L.c_in, co_n = L.c_out;
    parallel_for_chunks(A.n_out, [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            const double* gp = grad_pre + n * co_n;
            for (uint32_t s = A.offsets[n]; s < A.offsets[n + 1]; ++s) {
                const double* f = in + (std::size_t)A.indices[s] * ci_n;
                double* g = gw + (std::size_t)s * ci_n * co_n;
                for (uint32_t ci = 0; ci < ci_n; ++ci)
                    for (uint32_t c = 0; c < co_n; ++c) g[ci * co_n + c] += f[ci] * gp[c];
            }
        }
    });
}

// grad_in via the reverse view: per input node, its forward slots ascending.
static void pcn_input_grad(const PcnLayer& L, const double* grad_pre, double* gin) {
    const AdjacencyList& A = L.adjacency;
    if (A.rev_offsets.size() != (std::size_t)A.n_in + 1)
        throw Error("pcn_backward: adjacency reverse view not built");
    const uint32_t ci_n = L.c_in, co_n = L.c_out;
    parallel_for_chunks(A.n_in, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            double* g = gin + j * ci_n;
            for (uint32_t ci = 0; ci < ci_n; ++ci) g[ci] = 0.0;
            for (uint32_t r = A.rev_offsets[j]; r < A.rev_offsets[j + 1]; ++r) {
                const double* w = L.weights.data() + (std::size_t)A.rev_slot[r] * ci_n * co_n;
                const double* gp = grad_pre + (std::size_t)A.rev_node[r] * co_n;
                for (uint32_t ci = 0; ci < ci_n; ++ci) {
                    double acc = 0.0;
                    for (uint32_t c = 0; c < co_n; ++c) acc += w[ci * co_n + c] * gp[c];
                    g[ci] += acc;
                }
            }
        }
    });
}

static void check_layer_shapes(const PcnLayer& L, std::size_t in_size) {
    if (L.adjacency.offsets.size() != (std::size_t)L.adjacency.n_out + 1)
        throw InputError("pcn layer: malformed adjacency");
    if (L.weights.size() != L.weight_count())
        throw InputError("pcn layer: weight count does not match adjacency");
    if (in_size != (std::size_t)L.adjacency.n_in * L.c_in)
        throw InputError("pcn layer: input feature size mismatch");
}

std::vector<double> pcn_forward(const PcnLayer& layer, const std::vector<double>& f_in) {
    check_layer_shapes(layer, f_in.size());
    std::vector<double> out((std::size_t)layer.adjacency.n_out * layer.c_out);
    pcn_forward_pre(layer, f_in.data(), out.data());
    for (double& v : out) v = activate(layer.activation, v);
    return out;
}

void pcn_backward(const PcnLayer& layer, const std::vector<double>& f_in,
                  const std::vector<double>& grad_out, std::vector<double>& grad_f_in,
                  std::vector<double>& grad_w) {
    check_layer_shapes(layer, f_in.size());
    const std::size_t out_size = (std::size_t)layer.adjacency.n_out * layer.c_out;
    if (grad_out.size() != out_size) throw InputError("pcn_backward: gradient size mismatch");

    std::vector<double> pre(out_size);
    pcn_forward_pre(layer, f_in.data(), pre.data());
    std::vector<double> grad_pre(out_size);
    for (std::size_t i = 0; i < out_size; ++i)
        grad_pre[i] = grad_out[i] * activate_deriv(layer.activation, pre[i]);

    grad_w.assign(layer.weights.size(), 0.0);
    pcn_weight_grad_accum(layer, f_in.data(), grad_pre.data(), grad_w.data());
    grad_f_in.assign(f_in.size(), 0.0);
    pcn_input_grad(layer, grad_pre.data(), grad_f_in.data());
}

static void bridge_forward_pre(const BridgeLayer& b, const double* latent, double* pre) {
    parallel_for_chunks(b.out_dim, [&](std::size_t begin, std::size_t end) {
        for (std::size_t o = begin; o < end; ++o) {
            double acc = b.bias[o];
            const double* w = b.weights.data() + o * b.in_dim;
            for (uint32_t i = 0; i < b.in_dim; ++i) acc += w[i] * latent[i];
            pre[o] = acc;
        }
    });
}

static void check_bridge_shapes(const BridgeLayer& b, std::size_t latent_size) {
    if (b.weights.size() != (std::size_t)b.in_dim * b.out_dim || b.bias.size() != b.out_dim)
        throw InputError("bridge layer: weight/bias shape mismatch");
    if (latent_size != b.in_dim) throw InputError("bridge layer: latent size mismatch");
}

std::vector<double> bridge_forward(const BridgeLayer& b, const std::vector<double>& latent) {
    check_bridge_shapes(b, latent.size());
    std::vector<double> out(b.out_dim);
    bridge_forward_pre(b, latent.data(), out.data());
    for (double& v : out) v = activate(b.activation, v);
    return out;
}

void bridge_backward(const BridgeLayer& b, const std::vector<double>& latent,
                     const std::vector<double>& grad_out, std::vector<double>& grad_latent,
                     std::vector<double>& grad_w, std::vector<double>& grad_bias) {
    check_bridge_shapes(b, latent.size());
    if (grad_out.size() != b.out_dim) throw InputError("bridge_backward: gradient size mismatch");

    std::vector<double> pre(b.out_dim);
    bridge_forward_pre(b, latent.data(), pre.data());
    std::vector<double> grad_pre(b.out_dim);
    for (std::size_t o = 0; o < b.out_dim; ++o)
        grad_pre[o] = grad_out[o] * activate_deriv(b.activation, pre[o]);

    grad_w.assign(b.weights.size(), 0.0);
    grad_bias.assign(b.bias.size(), 0.0);
    parallel_for_chunks(b.out_dim, [&](std::size_t begin, std::size_t end) {
        for (std::size_t o = begin; o < end; ++o) {
            double* gw = grad_w.data() + o * b.in_dim;
            for (uint32_t i = 0; i < b.in_dim; ++i) gw[i] += grad_pre[o] * latent[i];
            grad_bias[o] += grad_pre[o];
        }
    });
    grad_latent.assign(latent.size(), 0.0);
    parallel_for_chunks(b.in_dim, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double acc = 0.0;
            for (uint32_t o = 0; o < b.out_dim; ++o)
                acc += b.weights[(std::size_t)o * b.in_dim + i] * grad_pre[o];
            grad_latent[i] = acc;
        }
    });
}

// ------------------------------------------------------------ construction

NetworkConfig default_network_config(std::size_t level_count) {
    NetworkConfig cfg;
    cfg.channels.resize(level_count);
    for (std::size_t l = 0; l < level_count; ++l)
        cfg.channels[l] = (uint32_t)std::min<std::size_t>(8, std::size_t(1) << l);
    return cfg;
}

PcnNetwork build_network(const TetraGrid& grid, const SummitHierarchy& h,
                         const NetworkConfig& cfg, uint64_t seed) {
    const std::size_t L = h.level_count();
    if (L == 0) throw InputError("build_network: empty hierarchy");
    if (cfg.channels.size() != L)
        throw InputError("build_network: need one channel width per hierarchy level");
    if (cfg.channels[0] != 1)
        throw InputError("build_network: level-0 channel width must be 1");
    for (uint32_t c : cfg.channels)
        if (c == 0) throw InputError("build_network: zero channel width");
    if (cfg.latent_dim == 0) throw InputError("build_network: zero latent dim");

    const std::size_t deepest = L - 1;
    Rng rng(seed);

    PcnNetwork net;
    net.knn = cfg.k;
    net.part_restricted = cfg.part_restricted;

    net.bridge.in_dim = cfg.latent_dim;
    net.bridge.out_dim = (uint32_t)(h.levels[deepest].size() * cfg.channels[deepest]);
    net.bridge.activation = L > 1 ? Activation::relu : Activation::linear;
    const double bl = std::sqrt(6.0 / net.bridge.in_dim);
    net.bridge.weights.resize((std::size_t)net.bridge.in_dim * net.bridge.out_dim);
    for (double& w : net.bridge.weights) w = rng.uniform(-bl, bl);
    net.bridge.bias.assign(net.bridge.out_dim, 0.0);

    for (std::size_t j = 0; j + 1 < L; ++j) {
        const std::size_t fine = deepest - j - 1;
        PcnLayer lay;
        lay.adjacency = level_adjacency(grid, h, fine, cfg.k, cfg.part_restricted);
        lay.c_in = cfg.channels[fine + 1];
        lay.c_out = cfg.channels[fine];
        lay.activation = fine == 0 ? Activation::linear : Activation::relu;
        lay.weights.resize(lay.weight_count());
        // Canonical weight order doubles as the init order: per-node fan-in
        // m(n)·C_in drives the He-uniform limit.
        std::size_t at = 0;
        for (uint32_t n = 0; n < lay.adjacency.n_out; ++n) {
            const double limit = std::sqrt(6.0 / ((double)lay.adjacency.degree(n) * lay.c_in));
            const std::size_t count = (std::size_t)lay.adjacency.degree(n) * lay.c_in * lay.c_out;
            for (std::size_t i = 0; i < count; ++i) lay.weights[at++] = rng.uniform(-limit, limit);
        }
        net.layers.push_back(std::move(lay));
    }
    return net;
}

// --------------------------------------------------------------- accounting

LayerParamReport count_layer(const PcnLayer& layer, const std::string& name) {
    LayerParamReport r;
    r.name = name;
    r.params = layer.weight_count();
    r.bytes = r.params * 4;
    r.fc_params = (std::size_t)layer.adjacency.n_in * layer.adjacency.n_out * layer.c_in *
                  layer.c_out;
    r.fc_bytes = r.fc_params * 4;
    return r;
}

ParamReport count_parameters(const PcnNetwork& net) {
    ParamReport rep;
    LayerParamReport b;
    b.name = "bridge " + std::to_string(net.bridge.in_dim) + " -> " +
             std::to_string(net.bridge.out_dim);
    b.params = net.bridge.weights.size() + net.bridge.bias.size();
    b.bytes = b.params * 4;
    b.fc_params = b.params;  // the bridge is dense already
    b.fc_bytes = b.bytes;
    rep.layers.push_back(b);
    for (std::size_t j = 0; j < net.layers.size(); ++j) {
        const auto& L = net.layers[j];
        rep.layers.push_back(count_layer(
            L, "pcn" + std::to_string(j) + " " + std::to_string(L.adjacency.n_in) + "x" +
                   std::to_string(L.c_in) + " -> " + std::to_string(L.adjacency.n_out) + "x" +
                   std::to_string(L.c_out)));
    }
    for (const auto& l : rep.layers) {
        rep.total_params += l.params;
        rep.total_bytes += l.bytes;
        rep.fc_total_params += l.fc_params;
        rep.fc_total_bytes += l.fc_bytes;
    }
    return rep;
}

static std::string human_bytes(std::size_t bytes) {
    char buf[64];
    if (bytes >= 1000000000ull)
        std::snprintf(buf, sizeof buf, "%.4f GB", (double)bytes / 1e9);
    else if (bytes >= 1000000ull)
        std::snprintf(buf, sizeof buf, "%.3f MB", (double)bytes / 1e6);
    else
        std::snprintf(buf, sizeof buf, "%zu B", bytes);
    return buf;
}

std::string param_report_table(const ParamReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %14s %14s %18s %16s\n", "layer", "params", "memory",
                  "dense params", "dense memory");
    out += line;
    auto row = [&](const std::string& name, std::size_t p, std::size_t b, std::size_t fp,
                   std::size_t fb) {
        std::snprintf(line, sizeof line, "%-28s %14zu %14s %18zu %16s\n", name.c_str(), p,
                      human_bytes(b).c_str(), fp, human_bytes(fb).c_str());
        out += line;
    };
    for (const auto& l : report.layers) row(l.name, l.params, l.bytes, l.fc_params, l.fc_bytes);
    row("total", report.total_params, report.total_bytes, report.fc_total_params,
        report.fc_total_bytes);
    if (report.total_bytes > 0) {
        std::snprintf(line, sizeof line, "dense-to-sparse ratio: %.1fx\n",
                      (double)report.fc_total_bytes / (double)report.total_bytes);
        out += line;
    }
    return out;
}

// ----------------------------------------------------------------- training

namespace {

// Per-sample activations of the whole decoder, reused across samples.
struct ForwardScratch {
    std::vector<double> bridge_pre, bridge_act;
    std::vector<std::vector<double>> pre, act;  // one per pcn layer
};

void network_forward(const PcnNetwork& net, const std::vector<double>& latent,
                     ForwardScratch& s) {
    s.bridge_pre.resize(net.bridge.out_dim);
    bridge_forward_pre(net.bridge, latent.data(), s.bridge_pre.data());
    s.bridge_act.resize(net.bridge.out_dim);
    for (std::size_t i = 0; i < s.bridge_pre.size(); ++i)
        s.bridge_act[i] = activate(net.bridge.activation, s.bridge_pre[i]);

    s.pre.resize(net.layers.size());
    s.act.resize(net.layers.size());
    const std::vector<double>* in = &s.bridge_act;
    for (std::size_t j = 0; j < net.layers.size(); ++j) {
        const PcnLayer& L = net.layers[j];
        check_layer_shapes(L, in->size());
        s.pre[j].resize((std::size_t)L.adjacency.n_out * L.c_out);
        pcn_forward_pre(L, in->data(), s.pre[j].data());
        s.act[j].resize(s.pre[j].size());
        for (std::size_t i = 0; i < s.pre[j].size(); ++i)
            s.act[j][i] = activate(L.activation, s.pre[j][i]);
        in = &s.act[j];
    }
}

struct AdamState {
    std::vector<double> m, v;
};

}  // namespace

TrainHistory train_toy(PcnNetwork& net, const std::vector<std::vector<double>>& latents,
                       const std::vector<TsdfField>& fields, const TrainOptions& opt) {
    if (latents.empty() || latents.size() != fields.size())
        throw InputError("train_toy: need a non-empty latent/field pairing");
    if (opt.batch_size == 0 || opt.epochs == 0)
        throw InputError("train_toy: batch size and epochs must be >= 1");
    const std::size_t out_n = net.output_size();
    for (const auto& l : latents)
        if (l.size() != net.bridge.in_dim) throw InputError("train_toy: latent size mismatch");
    for (const auto& f : fields)
        if (f.values.size() != out_n) throw InputError("train_toy: field size mismatch");

    // Parameter blocks in fixed order: bridge W, bridge b, then layer weights.
    std::vector<std::vector<double>*> params{&net.bridge.weights, &net.bridge.bias};
    for (auto& L : net.layers) params.push_back(&L.weights);
    std::vector<std::vector<double>> grads(params.size());
    std::vector<AdamState> adam(params.size());
    for (std::size_t p = 0; p < params.size(); ++p) {
        grads[p].resize(params[p]->size());
        adam[p].m.assign(params[p]->size(), 0.0);
        adam[p].v.assign(params[p]->size(), 0.0);
    }

    Rng rng(opt.seed);
    std::vector<uint32_t> order(latents.size());
    std::iota(order.begin(), order.end(), 0u);

    ForwardScratch scratch;
    std::vector<double> grad_a, grad_pre, grad_in;
    TrainHistory history;
    uint64_t step = 0;

    for (uint32_t epoch = 0; epoch < opt.epochs; ++epoch) {
        shuffle(order, rng);
        double epoch_loss = 0.0;

        for (std::size_t at = 0; at < order.size(); at += opt.batch_size) {
            const std::size_t batch_end = std::min(order.size(), at + opt.batch_size);
            const double inv_batch = 1.0 / double(batch_end - at);
            for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);

            for (std::size_t b = at; b < batch_end; ++b) {
                const std::vector<double>& latent = latents[order[b]];
                const TsdfField& target = fields[order[b]];
                network_forward(net, latent, scratch);
                const std::vector<double>& pred =
                    net.layers.empty() ? scratch.bridge_act : scratch.act.back();

                double mse = 0.0;
                grad_a.resize(out_n);
                const double inv_n = 1.0 / double(out_n);
                for (std::size_t i = 0; i < out_n; ++i) {
                    const double d = pred[i] - target.values[i];
                    mse += d * d;
                    grad_a[i] = 2.0 * d * inv_n;
                }
                epoch_loss += mse * inv_n;

                for (std::size_t j = net.layers.size(); j-- > 0;) {
                    const PcnLayer& L = net.layers[j];
                    const std::vector<double>& pre = scratch.pre[j];
                    grad_pre.resize(pre.size());
                    for (std::size_t i = 0; i < pre.size(); ++i)
                        grad_pre[i] = grad_a[i] * activate_deriv(L.activation, pre[i]);
                    const std::vector<double>& in =
                        j == 0 ? scratch.bridge_act : scratch.act[j - 1];
                    pcn_weight_grad_accum(L, in.data(), grad_pre.data(), grads[2 + j].data());
                    grad_in.resize(in.size());
                    pcn_input_grad(L, grad_pre.data(), grad_in.data());
                    grad_a = grad_in;
                }

                grad_pre.resize(net.bridge.out_dim);
                for (std::size_t o = 0; o < net.bridge.out_dim; ++o)
                    grad_pre[o] = grad_a[o] * activate_deriv(net.bridge.activation,
                                                             scratch.bridge_pre[o]);
                parallel_for_chunks(net.bridge.out_dim, [&](std::size_t b0, std::size_t e0) {
                    for (std::size_t o = b0; o < e0; ++o) {
                        double* gw = grads[0].data() + o * net.bridge.in_dim;
                        for (uint32_t i = 0; i < net.bridge.in_dim; ++i)
                            gw[i] += grad_pre[o] * latent[i];
                        grads[1][o] += grad_pre[o];
                    }
                });
            }

            // Adam; bias-corrected, batch-mean gradients.
            ++step;
            const double c1 = 1.0 - std::pow(opt.beta1, (double)step);
            const double c2 = 1.0 - std::pow(opt.beta2, (double)step);
            for (std::size_t p = 0; p < params.size(); ++p) {
                std::vector<double>& w = *params[p];
                for (std::size_t i = 0; i < w.size(); ++i) {
                    const double g = grads[p][i] * inv_batch;
                    adam[p].m[i] = opt.beta1 * adam[p].m[i] + (1.0 - opt.beta1) * g;
                    adam[p].v[i] = opt.beta2 * adam[p].v[i] + (1.0 - opt.beta2) * g * g;
                    w[i] -= opt.learning_rate * (adam[p].m[i] / c1) /
                            (std::sqrt(adam[p].v[i] / c2) + opt.eps);
                }
            }
        }

        history.epoch_loss.push_back(epoch_loss / double(order.size()));
        if (opt.stop_loss > 0.0 && history.epoch_loss.back() < opt.stop_loss) break;
    }
    return history;
}

TsdfField infer(const PcnNetwork& net, const std::vector<double>& latent, double tau) {
    ForwardScratch s;
    network_forward(net, latent, s);
    const std::vector<double>& pred = net.layers.empty() ? s.bridge_act : s.act.back();
    TsdfField field;
    field.tau = tau;
    field.values.resize(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
        field.values[i] = std::clamp(pred[i], -1.0, 1.0);
    return field;
}

// --------------------------------------------------------------------- TPCN

void save_tpcn(const PcnNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write("TPCN", 4);
    write_u32(out, 1);  // version
    if (net.hierarchy_ref.size() > 0xffff) throw Error("save_tpcn: hierarchy path too long");
    write_u16(out, (uint16_t)net.hierarchy_ref.size());
    out.write(net.hierarchy_ref.data(), (std::streamsize)net.hierarchy_ref.size());
    write_u32(out, net.knn);
    out.put(net.part_restricted ? 1 : 0);
    write_u32(out, (uint32_t)(1 + net.layers.size()));

    out.put(0);  // bridge tag
    write_u32(out, net.bridge.in_dim);
    write_u32(out, net.bridge.out_dim);
    out.put((char)net.bridge.activation);
    for (double w : net.bridge.weights) write_f32(out, (float)w);
    for (double b : net.bridge.bias) write_f32(out, (float)b);

    for (const auto& L : net.layers) {
        out.put(1);  // pcn tag
        write_u32(out, L.adjacency.n_in);
        write_u32(out, L.adjacency.n_out);
        write_u32(out, L.c_in);
        write_u32(out, L.c_out);
        out.put((char)L.activation);
        write_u64(out, L.adjacency.content_hash());
        for (double w : L.weights) write_f32(out, (float)w);
    }
    if (!out) throw Error("write failed: " + path);
}

PcnNetwork load_tpcn(const std::string& path, const TetraGrid& grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    expect_magic(in, "TPCN", path);
    if (read_u32(in, path) != 1) throw InputError(path + ": unsupported version");

    PcnNetwork net;
    const uint16_t ref_len = read_u16(in, path);
    net.hierarchy_ref.resize(ref_len);
    if (ref_len && !in.read(net.hierarchy_ref.data(), ref_len))
        throw InputError(path + ": truncated file");
    net.knn = read_u32(in, path);
    net.part_restricted = in.get() != 0;
    const uint32_t layer_count = read_u32(in, path);
    if (layer_count == 0) throw InputError(path + ": no layers");
    if (net.knn == 0) throw InputError(path + ": k must be >= 1");

    // Rebuild connectivity first so per-layer weight counts are known.
    std::filesystem::path ref(net.hierarchy_ref);
    if (ref.is_relative()) ref = std::filesystem::path(path).parent_path() / ref;
    const SummitHierarchy h = load_thie(ref.string(), &grid);
    if (h.level_count() != layer_count)  // bridge + one layer per transition
        throw InputError(path + ": layer count does not match hierarchy depth");
    std::vector<AdjacencyList> adjs;
    for (uint32_t j = 0; j + 1 < layer_count; ++j) {
        const std::size_t fine = (h.level_count() - 1) - j - 1;
        adjs.push_back(level_adjacency(grid, h, fine, net.knn, net.part_restricted));
    }

    auto read_activation = [&]() {
        const int a = in.get();
        if (a != 0 && a != 1) throw InputError(path + ": bad activation tag");
        return (Activation)a;
    };

    for (uint32_t li = 0; li < layer_count; ++li) {
        const int tag = in.get();
        if (li == 0) {
            if (tag != 0) throw InputError(path + ": first layer must be the bridge");
            net.bridge.in_dim = read_u32(in, path);
            net.bridge.out_dim = read_u32(in, path);
            net.bridge.activation = read_activation();
            net.bridge.weights.resize((std::size_t)net.bridge.in_dim * net.bridge.out_dim);
            for (double& w : net.bridge.weights) w = read_f32(in, path);
            net.bridge.bias.resize(net.bridge.out_dim);
            for (double& b : net.bridge.bias) b = read_f32(in, path);
            continue;
        }
        if (tag != 1) throw InputError(path + ": unexpected layer tag");
        PcnLayer L;
        L.adjacency = std::move(adjs[li - 1]);
        const uint32_t n_in = read_u32(in, path), n_out = read_u32(in, path);
        L.c_in = read_u32(in, path);
        L.c_out = read_u32(in, path);
        L.activation = read_activation();
        const uint64_t hash = read_u64(in, path);
        if (n_in != L.adjacency.n_in || n_out != L.adjacency.n_out)
            throw InputError(path + ": layer dimensions do not match the hierarchy");
        if (hash != L.adjacency.content_hash())
            throw InputError(path + ": adjacency content hash mismatch (stale hierarchy file?)");
        if (L.c_in == 0 || L.c_out == 0) throw InputError(path + ": zero channel width");
        L.weights.resize(L.weight_count());
        for (double& w : L.weights) w = read_f32(in, path);
        net.layers.push_back(std::move(L));
    }

    // Stitch check across the whole decoder.
    const std::size_t deepest = h.level_count() - 1;
    const uint32_t c_top = net.layers.empty() ? 1 : net.layers.front().c_in;
    if (net.bridge.out_dim != h.levels[deepest].size() * c_top)
        throw InputError(path + ": bridge output does not match the coarsest level");
    for (std::size_t j = 0; j + 1 < net.layers.size(); ++j)
        if (net.layers[j].c_out != net.layers[j + 1].c_in ||
            net.layers[j].adjacency.n_out != net.layers[j + 1].adjacency.n_in)
            throw InputError(path + ": mismatched consecutive layers");
    if (!net.layers.empty() && net.layers.back().c_out != 1)
        throw InputError(path + ": final layer must emit one channel");
    return net;
}

}  // namespace tetshell
