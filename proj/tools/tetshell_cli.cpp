// SPDX-License-Identifier: Apache-2.0
//
// tetshell: outer-shell TSDF pipeline driver. Every stage of the pipeline is
// a subcommand; defaults may come from a JSON config file, explicit flags win.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tetshell/error.hpp"
#include "tetshell/eval.hpp"
#include "tetshell/hierarchy.hpp"
#include "tetshell/marching_tetra.hpp"
#include "tetshell/mesh_io.hpp"
#include "tetshell/parallel.hpp"
#include "tetshell/pcn.hpp"
#include "tetshell/shapes.hpp"
#include "tetshell/shell_ops.hpp"
#include "tetshell/skinning.hpp"
#include "tetshell/tetra_grid.hpp"
#include "tetshell/tsdf.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tetshell;

namespace {

// Defaults for every tunable; a config file overrides these, flags override
// the config file (the config is read before CLI11 parses, so flag values
// always win).
struct Settings {
    double tau = 0.03;
    double res = 0.01;
    double offset = 0.04;
    double iso = 0.0;
    double dmax = 0.02;
    double lr = 1e-3;
    double stop_loss = 0.0;
    uint64_t seed = 1;
    unsigned k = 5;
    unsigned batch = 5;
    unsigned epochs = 500;
    unsigned samples = 100000;
    unsigned latent_dim = 256;
    int threads = 0;
    int decimate_target = 0;
    int subdiv = 0;
    bool part_restricted = true;
    std::vector<unsigned> channels;  // empty = default ladder for the hierarchy depth
};

void apply_config(Settings& s, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (!j.is_object()) throw InputError(path + ": config must be a JSON object");
    auto num = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    num("tau", s.tau);
    num("res", s.res);
    num("offset", s.offset);
    num("iso", s.iso);
    num("dmax", s.dmax);
    num("lr", s.lr);
    num("stop_loss", s.stop_loss);
    num("seed", s.seed);
    num("k", s.k);
    num("batch", s.batch);
    num("epochs", s.epochs);
    num("samples", s.samples);
    num("latent_dim", s.latent_dim);
    num("threads", s.threads);
    num("decimate", s.decimate_target);
    num("subdiv", s.subdiv);
    num("part_restricted", s.part_restricted);
    if (j.contains("channels")) s.channels = j.at("channels").get<std::vector<unsigned>>();
}

std::vector<double> load_latent_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (j.is_object() && j.contains("latent")) j = j.at("latent");
    if (!j.is_array()) throw InputError(path + ": expected a JSON array of numbers");
    std::vector<double> latent;
    latent.reserve(j.size());
    for (const auto& v : j) latent.push_back(v.get<double>());
    return latent;
}

NetworkConfig network_config(const Settings& s, const SummitHierarchy& h) {
    NetworkConfig cfg = default_network_config(h.level_count());
    cfg.latent_dim = s.latent_dim;
    cfg.k = s.k;
    cfg.part_restricted = s.part_restricted;
    if (!s.channels.empty()) {
        if (s.channels.size() != h.level_count())
            throw InputError("config: channels needs one entry per hierarchy level");
        cfg.channels.assign(s.channels.begin(), s.channels.end());
    }
    return cfg;
}

std::vector<uint32_t> parse_sizes(const std::string& text) {
    std::vector<uint32_t> sizes;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t end = text.find(',', at);
        if (end == std::string::npos) end = text.size();
        try {
            sizes.push_back((uint32_t)std::stoul(text.substr(at, end - at)));
        } catch (const std::exception&) {
            throw InputError("--sizes: cannot parse '" + text + "'");
        }
        at = end + 1;
    }
    if (sizes.empty()) throw InputError("--sizes: no level sizes given");
    return sizes;
}

}  // namespace

int main(int argc, char** argv) {
    Settings s;

    CLI::App app{"Tetrahedral outer-shell TSDF toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config with default overrides")
        ->expected(1);
    app.add_option("--threads", s.threads, "Worker thread cap (0 = all cores)");

    // Config must shape the defaults before CLI11 binds flag values.
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") apply_config(s, argv[i + 1]);
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg.rfind("--config=", 0) == 0) apply_config(s, arg.substr(9));
        }
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    // Options are all assigned before any subcommand callback fires, so this
    // is the point where the thread cap is known but no work has started.
    app.parse_complete_callback([&] { set_thread_count(s.threads); });

    // ---------------------------------------------------------------- shell
    auto* shell = app.add_subcommand("shell", "Outer-shell surface construction");
    shell->require_subcommand(1);
    auto* shell_build = shell->add_subcommand(
        "build", "Inflate a body mesh, then coarsen and re-densify it");
    std::string in_mesh, out_path;
    shell_build->add_option("--template", in_mesh, "Body mesh (OBJ/PLY)")
        ->required()
        ->check(CLI::ExistingFile);
    shell_build->add_option("--offset", s.offset, "Inflation offset in meters");
    shell_build->add_option("--decimate", s.decimate_target,
                            "Target vertex count (0 = skip)");
    shell_build->add_option("--subdiv", s.subdiv, "Midpoint subdivision iterations");
    shell_build->add_option("-o,--output", out_path, "Output mesh")->required();
    shell_build->callback([&] {
        TriMesh mesh = load_mesh(in_mesh);
        mesh = inflate_mesh(mesh, s.offset);
        if (s.decimate_target > 0) mesh = decimate(mesh, (std::size_t)s.decimate_target);
        if (s.subdiv > 0) mesh = subdivide_midpoint(mesh, s.subdiv);
        save_mesh(mesh, out_path);
        std::printf("%zu vertices, %zu faces -> %s\n", mesh.vertices.size(), mesh.faces.size(),
                    out_path.c_str());
    });

    // ----------------------------------------------------------------- grid
    auto* grid_cmd = app.add_subcommand("grid", "Tetrahedral grid construction");
    grid_cmd->require_subcommand(1);
    std::string grid_path, tmpl_path, hier_path, sizes_text;

    auto* grid_tetra = grid_cmd->add_subcommand("tetra", "Fill a closed shell with tetrahedra");
    grid_tetra->add_option("--shell", in_mesh, "Closed shell mesh")
        ->required()
        ->check(CLI::ExistingFile);
    grid_tetra->add_option("--res", s.res, "Lattice spacing in meters");
    grid_tetra->add_option("-o,--output", out_path, "Output grid (.tgrd)")->required();
    grid_tetra->callback([&] {
        const TriMesh shell_mesh = load_mesh(in_mesh);
        const TetraGrid grid = tetrahedralize(shell_mesh, s.res);
        save_tgrd(grid, out_path);
        std::printf("%zu summits, %zu tetrahedra -> %s\n", grid.summits.size(),
                    grid.tets.size(), out_path.c_str());
    });

    auto* grid_labels = grid_cmd->add_subcommand("labels", "Assign body-part labels to summits");
    grid_labels->add_option("--grid", grid_path, "Input grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    grid_labels->add_option("--template", tmpl_path, "Skinned template (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    grid_labels->add_option("-o,--output", out_path, "Output grid (.tgrd)")->required();
    grid_labels->callback([&] {
        TetraGrid grid = load_tgrd(grid_path);
        const SkinnedTemplate tmpl = load_template_json(tmpl_path);
        assign_part_labels(grid, tmpl);
        save_tgrd(grid, out_path);
        std::printf("labeled %zu summits -> %s\n", grid.summits.size(), out_path.c_str());
    });

    auto* grid_hier = grid_cmd->add_subcommand("hierarchy", "Farthest-point-sampled summit levels");
    grid_hier->add_option("--grid", grid_path, "Input grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    grid_hier
        ->add_option("--sizes", sizes_text,
                     "Comma-separated level sizes, coarsening left to right; the "
                     "full-resolution level is implied when omitted")
        ->required();
    grid_hier->add_option("-o,--output", out_path, "Output hierarchy (.thie)")->required();
    grid_hier->callback([&] {
        const TetraGrid grid = load_tgrd(grid_path);
        std::vector<uint32_t> sizes = parse_sizes(sizes_text);
        if (sizes.front() != grid.summits.size())
            sizes.insert(sizes.begin(), (uint32_t)grid.summits.size());
        const SummitHierarchy h = build_hierarchy(grid, sizes);
        save_thie(h, out_path);
        std::printf("%zu levels -> %s\n", h.level_count(), out_path.c_str());
    });

    // ----------------------------------------------------------------- tsdf
    auto* tsdf_cmd = app.add_subcommand("tsdf", "Ground-truth field generation");
    tsdf_cmd->require_subcommand(1);
    std::string scan_path;
    auto* tsdf_compute = tsdf_cmd->add_subcommand(
        "compute", "Evaluate the truncated signed distance field at every summit");
    tsdf_compute->add_option("--grid", grid_path, "Grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    tsdf_compute->add_option("--scan", scan_path, "Surface mesh")
        ->required()
        ->check(CLI::ExistingFile);
    tsdf_compute
        ->add_option("--template", tmpl_path,
                     "Skinned template (JSON); when given, the scan is bound to its "
                     "skeleton and warped to the canonical pose first")
        ->check(CLI::ExistingFile);
    tsdf_compute->add_option("--tau", s.tau, "Truncation distance in meters");
    tsdf_compute->add_option("-o,--output", out_path, "Output field (.ttsf)")->required();
    tsdf_compute->callback([&] {
        const TetraGrid grid = load_tgrd(grid_path);
        const TriMesh scan = load_mesh(scan_path);
        TsdfField field;
        if (tmpl_path.empty()) {
            field = compute_tsdf(grid, scan, s.tau);
        } else {
            const SkinnedTemplate tmpl = load_template_json(tmpl_path);
            field = generate_gt_field(scan, tmpl, grid, s.tau);
        }
        save_ttsf(field, out_path);
        std::printf("%zu values, tau %g -> %s\n", field.values.size(), field.tau,
                    out_path.c_str());
    });

    // ----------------------------------------------------------------- mesh
    auto* mesh_cmd = app.add_subcommand("mesh", "Surface extraction and re-posing");
    mesh_cmd->require_subcommand(1);
    std::string field_path, pose_path;

    auto* mesh_extract = mesh_cmd->add_subcommand("extract", "Marching tetrahedra at an isovalue");
    mesh_extract->add_option("--grid", grid_path, "Grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    mesh_extract->add_option("--field", field_path, "Field (.ttsf)")
        ->required()
        ->check(CLI::ExistingFile);
    mesh_extract->add_option("--iso", s.iso, "Isovalue");
    mesh_extract->add_option("-o,--output", out_path, "Output mesh")->required();
    mesh_extract->callback([&] {
        const TetraGrid grid = load_tgrd(grid_path);
        const TsdfField field = load_ttsf(field_path, &grid);
        const TriMesh mesh = extract_isosurface(grid, field, s.iso);
        save_mesh(mesh, out_path);
        std::printf("%zu vertices, %zu faces -> %s\n", mesh.vertices.size(), mesh.faces.size(),
                    out_path.c_str());
    });

    auto* mesh_repose = mesh_cmd->add_subcommand("repose", "Skin a canonical mesh into a pose");
    mesh_repose->add_option("--mesh", in_mesh, "Mesh in the canonical pose")
        ->required()
        ->check(CLI::ExistingFile);
    mesh_repose->add_option("--template", tmpl_path, "Skinned template (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    mesh_repose->add_option("--pose", pose_path, "Per-bone rigid transforms (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    mesh_repose->add_option("-o,--output", out_path, "Output mesh")->required();
    mesh_repose->callback([&] {
        const TriMesh mesh = load_mesh(in_mesh);
        const SkinnedTemplate tmpl = load_template_json(tmpl_path);
        const std::vector<BoneTransform> pose = load_pose_json(pose_path, tmpl.bone_count());
        save_mesh(repose(mesh, tmpl, pose), out_path);
        std::printf("reposed %zu vertices -> %s\n", mesh.vertices.size(), out_path.c_str());
    });

    // ------------------------------------------------------------------ pcn
    auto* pcn_cmd = app.add_subcommand("pcn", "Part Connection Network");
    pcn_cmd->require_subcommand(1);
    std::string net_path, data_dir, latent_path;

    auto* pcn_train = pcn_cmd->add_subcommand("train", "Fit the decoder to (latent, field) pairs");
    pcn_train->add_option("--grid", grid_path, "Grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_train->add_option("--hierarchy", hier_path, "Hierarchy (.thie)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_train
        ->add_option("--data", data_dir,
                     "Directory of paired NAME.latent.json / NAME.ttsf samples")
        ->required()
        ->check(CLI::ExistingDirectory);
    pcn_train->add_option("--epochs", s.epochs, "Training epochs");
    pcn_train->add_option("--batch", s.batch, "Minibatch size");
    pcn_train->add_option("--seed", s.seed, "Init/shuffle seed");
    pcn_train->add_option("--lr", s.lr, "Adam learning rate");
    pcn_train->add_option("--stop-loss", s.stop_loss, "Stop once epoch MSE < this (0 = off)");
    pcn_train->add_option("--k", s.k, "Neighbors per node");
    pcn_train->add_option("-o,--output", out_path, "Output network (.tpcn)")->required();
    pcn_train->callback([&] {
        const TetraGrid grid = load_tgrd(grid_path);
        const SummitHierarchy h = load_thie(hier_path, &grid);

        std::vector<std::vector<double>> latents;
        std::vector<TsdfField> fields;
        std::vector<fs::path> latent_files;
        for (const auto& entry : fs::directory_iterator(data_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.size() > 12 && name.substr(name.size() - 12) == ".latent.json")
                latent_files.push_back(entry.path());
        }
        std::sort(latent_files.begin(), latent_files.end());
        for (const auto& lf : latent_files) {
            std::string stem = lf.filename().string();
            stem.resize(stem.size() - 12);
            const fs::path ff = lf.parent_path() / (stem + ".ttsf");
            if (!fs::exists(ff)) throw InputError("missing field for sample: " + ff.string());
            latents.push_back(load_latent_json(lf.string()));
            fields.push_back(load_ttsf(ff.string(), &grid));
        }
        if (latents.empty()) throw InputError("no *.latent.json samples in " + data_dir);

        NetworkConfig cfg = network_config(s, h);
        if (!latents[0].empty()) cfg.latent_dim = (uint32_t)latents[0].size();
        PcnNetwork net = build_network(grid, h, cfg, s.seed);
        net.hierarchy_ref = hier_path;

        TrainOptions opt;
        opt.epochs = s.epochs;
        opt.batch_size = s.batch;
        opt.learning_rate = s.lr;
        opt.seed = s.seed;
        opt.stop_loss = s.stop_loss;
        const TrainHistory hist = train_toy(net, latents, fields, opt);
        for (std::size_t e = 0; e < hist.epoch_loss.size(); ++e)
            if ((e + 1) % 100 == 0 || e + 1 == hist.epoch_loss.size())
                std::printf("epoch %zu  mse %.3e\n", e + 1, hist.epoch_loss[e]);
        save_tpcn(net, out_path);
        std::printf("%zu samples, %zu epochs -> %s\n", latents.size(), hist.epoch_loss.size(),
                    out_path.c_str());
    });

    auto* pcn_infer = pcn_cmd->add_subcommand("infer", "Decode a latent vector into a field");
    pcn_infer->add_option("--net", net_path, "Network (.tpcn)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_infer->add_option("--grid", grid_path, "Grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_infer->add_option("--latent", latent_path, "Latent vector (JSON array)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_infer->add_option("--tau", s.tau, "Truncation distance stored with the field");
    pcn_infer->add_option("-o,--output", out_path, "Output field (.ttsf)")->required();
    pcn_infer->callback([&] {
        const TetraGrid grid = load_tgrd(grid_path);
        const PcnNetwork net = load_tpcn(net_path, grid);
        const TsdfField field = infer(net, load_latent_json(latent_path), s.tau);
        if (field.values.size() != grid.summits.size())
            throw Error("network output does not match the grid summit count");
        save_ttsf(field, out_path);
        std::printf("%zu values -> %s\n", field.values.size(), out_path.c_str());
    });

    auto* pcn_params = pcn_cmd->add_subcommand("params", "Parameter and memory accounting");
    pcn_params->add_option("--net", net_path, "Network (.tpcn)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_params->add_option("--grid", grid_path, "Grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    pcn_params->callback([&] {
        const TetraGrid grid = load_tgrd(grid_path);
        const PcnNetwork net = load_tpcn(net_path, grid);
        std::fputs(param_report_table(count_parameters(net)).c_str(), stdout);
    });

    // ----------------------------------------------------------------- eval
    auto* eval_cmd = app.add_subcommand("eval", "Benchmarks and comparisons");
    eval_cmd->require_subcommand(1);
    std::string mesh_a, mesh_b;
    bool as_json = false;

    auto* eval_chamfer = eval_cmd->add_subcommand("chamfer", "Symmetric Chamfer distance in cm");
    eval_chamfer->add_option("a", mesh_a, "First mesh")->required()->check(CLI::ExistingFile);
    eval_chamfer->add_option("b", mesh_b, "Second mesh")->required()->check(CLI::ExistingFile);
    eval_chamfer->add_option("--samples", s.samples, "Surface samples per mesh");
    eval_chamfer->callback([&] {
        std::printf("%.2f\n", chamfer_distance(load_mesh(mesh_a), load_mesh(mesh_b), s.samples));
    });

    auto* eval_heatmap = eval_cmd->add_subcommand("heatmap", "Per-vertex error colors");
    eval_heatmap->add_option("--recon", mesh_a, "Reconstruction")
        ->required()
        ->check(CLI::ExistingFile);
    eval_heatmap->add_option("--gt", mesh_b, "Ground truth")->required()->check(CLI::ExistingFile);
    eval_heatmap->add_option("--dmax", s.dmax, "Distance mapped to full red, meters");
    eval_heatmap->add_option("-o,--output", out_path, "Output colored PLY")->required();
    eval_heatmap->callback([&] {
        const TriMesh recon = load_mesh(mesh_a);
        const std::vector<double> dist = error_heatmap(recon, load_mesh(mesh_b));
        save_heatmap_ply(recon, dist, s.dmax, out_path);
        double worst = 0.0;
        for (double d : dist) worst = std::max(worst, d);
        std::printf("max error %.4f m -> %s\n", worst, out_path.c_str());
    });

    auto* eval_memcmp =
        eval_cmd->add_subcommand("memcmp", "Summit count vs uniform bounding-box voxels");
    eval_memcmp->add_option("--grid", grid_path, "Grid (.tgrd)")
        ->required()
        ->check(CLI::ExistingFile);
    eval_memcmp->add_option("--res", s.res, "Uniform voxel edge, meters");
    eval_memcmp->add_flag("--json", as_json, "Emit JSON instead of a table");
    eval_memcmp->callback([&] {
        const MemoryReport r = compare_memory(load_tgrd(grid_path), s.res);
        std::fputs((as_json ? memory_report_json(r) : memory_report_table(r)).c_str(), stdout);
    });

    // ---------------------------------------------------------------- shape
    auto* shape = app.add_subcommand("shape", "Procedural meshes and rigged bodies");
    shape->require_subcommand(1);
    double radius = 0.5, length = 1.0, side = 1.0, rx = 0.25, ry = 0.2, rz = 0.18;
    int subdiv_level = 4, radial = 48, rings = 40;
    std::string tmpl_out;

    auto* shape_sphere = shape->add_subcommand("sphere", "Subdivided icosahedron");
    shape_sphere->add_option("--radius", radius, "Radius, meters");
    shape_sphere->add_option("--subdiv", subdiv_level, "Subdivision level");
    shape_sphere->add_option("-o,--output", out_path, "Output mesh")->required();
    shape_sphere->callback([&] {
        save_mesh(make_icosphere(radius, subdiv_level), out_path);
        std::printf("sphere r=%g -> %s\n", radius, out_path.c_str());
    });

    auto* shape_ellipsoid = shape->add_subcommand("ellipsoid", "Scaled icosphere");
    shape_ellipsoid->add_option("--rx", rx, "x radius");
    shape_ellipsoid->add_option("--ry", ry, "y radius");
    shape_ellipsoid->add_option("--rz", rz, "z radius");
    shape_ellipsoid->add_option("--subdiv", subdiv_level, "Subdivision level");
    shape_ellipsoid->add_option("-o,--output", out_path, "Output mesh")->required();
    shape_ellipsoid->callback([&] {
        save_mesh(make_ellipsoid(rx, ry, rz, subdiv_level), out_path);
        std::printf("ellipsoid %g x %g x %g -> %s\n", rx, ry, rz, out_path.c_str());
    });

    auto* shape_cube = shape->add_subcommand("cube", "Axis-aligned cube");
    shape_cube->add_option("--side", side, "Edge length");
    shape_cube->add_option("-o,--output", out_path, "Output mesh")->required();
    shape_cube->callback([&] {
        save_mesh(make_cube(side), out_path);
        std::printf("cube side %g -> %s\n", side, out_path.c_str());
    });

    auto* shape_cylinder = shape->add_subcommand("cylinder", "Capped cylinder along z");
    shape_cylinder->add_option("--radius", radius, "Radius");
    shape_cylinder->add_option("--length", length, "Length");
    shape_cylinder->add_option("--radial", radial, "Radial segments");
    shape_cylinder->add_option("--rings", rings, "Height segments");
    shape_cylinder->add_option("-o,--output", out_path, "Output mesh")->required();
    shape_cylinder->callback([&] {
        save_mesh(make_cylinder(radius, length, radial, rings), out_path);
        std::printf("cylinder r=%g l=%g -> %s\n", radius, length, out_path.c_str());
    });

    auto* shape_humanoid = shape->add_subcommand("humanoid", "Slim T-posed body with skeleton");
    double human_res = 0.02;
    shape_humanoid->add_option("--res", human_res, "Surfacing resolution, meters");
    shape_humanoid->add_option("-o,--output", out_path, "Output mesh")->required();
    shape_humanoid->add_option("--template-out", tmpl_out, "Also write the rigged template JSON");
    shape_humanoid->callback([&] {
        const RiggedMesh rig = make_humanoid(human_res);
        save_mesh(rig.mesh, out_path);
        if (!tmpl_out.empty()) save_template_json(rig.tmpl, tmpl_out);
        std::printf("humanoid: %zu vertices, %zu faces -> %s\n", rig.mesh.vertices.size(),
                    rig.mesh.faces.size(), out_path.c_str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
