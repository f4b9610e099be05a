// SPDX-License-Identifier: Apache-2.0

#include "tetshell/mesh_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "tetshell/error.hpp"

namespace tetshell {

namespace {

std::string lower_ext(const std::string& path) {
    const size_t dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = char(std::tolower(uint8_t(c)));
    return ext;
}

[[noreturn]] void parse_fail(const std::string& name, size_t line, const std::string& what) {
    throw InputError(name + ":" + std::to_string(line) + ": " + what);
}

// OBJ index: 1-based, negative counts back from the current end.
uint32_t resolve_obj_index(long idx, size_t count, const std::string& name, size_t line) {
    long r = idx > 0 ? idx - 1 : long(count) + idx;
    if (idx == 0 || r < 0 || r >= long(count))
        parse_fail(name, line, "vertex index " + std::to_string(idx) + " out of range");
    return uint32_t(r);
}

void fan_triangulate(std::vector<std::array<uint32_t, 3>>& faces,
                     const std::vector<uint32_t>& poly) {
    for (size_t i = 1; i + 1 < poly.size(); ++i)
        faces.push_back({poly[0], poly[i], poly[i + 1]});
}

}  // namespace

TriMesh load_obj(std::istream& in, const std::string& name) {
    TriMesh mesh;
    std::vector<Vec3> file_normals;
    std::vector<long> corner_normal_ids;  // parallel to flattened corners, or -1
    std::vector<long> corner_vertex_ids;
    bool normals_usable = true;

    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z)) parse_fail(name, lineno, "bad vertex line");
            mesh.vertices.push_back(p);
        } else if (tag == "vn") {
            Vec3 n;
            if (!(ls >> n.x >> n.y >> n.z)) parse_fail(name, lineno, "bad normal line");
            file_normals.push_back(n);
        } else if (tag == "f") {
            std::vector<uint32_t> poly;
            std::string corner;
            while (ls >> corner) {
                // v, v/vt, v//vn, v/vt/vn
                long vi = 0, ni = 0;
                bool has_n = false;
                const size_t s1 = corner.find('/');
                try {
                    vi = std::stol(corner.substr(0, s1));
                    if (s1 != std::string::npos) {
                        const size_t s2 = corner.find('/', s1 + 1);
                        if (s2 != std::string::npos && s2 + 1 < corner.size()) {
                            ni = std::stol(corner.substr(s2 + 1));
                            has_n = true;
                        }
                    }
                } catch (const std::exception&) {
                    parse_fail(name, lineno, "bad face corner '" + corner + "'");
                }
                const uint32_t v = resolve_obj_index(vi, mesh.vertices.size(), name, lineno);
                poly.push_back(v);
                corner_vertex_ids.push_back(long(v));
                if (has_n) {
                    corner_normal_ids.push_back(
                        long(resolve_obj_index(ni, file_normals.size(), name, lineno)));
                } else {
                    corner_normal_ids.push_back(-1);
                    normals_usable = false;
                }
            }
            if (poly.size() < 3) parse_fail(name, lineno, "face with fewer than 3 corners");
            fan_triangulate(mesh.faces, poly);
        }
        // vt, usemtl, o, g, s, mtllib: ignored
    }

    // OBJ normals are per corner. Keep them only when they define one normal
    // per vertex consistently; callers recompute otherwise.
    if (normals_usable && !file_normals.empty() && !corner_vertex_ids.empty()) {
        std::vector<long> per_vertex(mesh.vertices.size(), -1);
        bool consistent = true;
        for (size_t c = 0; c < corner_vertex_ids.size() && consistent; ++c) {
            long& slot = per_vertex[size_t(corner_vertex_ids[c])];
            if (slot == -1) slot = corner_normal_ids[c];
            else if (slot != corner_normal_ids[c]) consistent = false;
        }
        if (consistent) {
            mesh.normals.resize(mesh.vertices.size());
            for (size_t v = 0; v < per_vertex.size(); ++v)
                mesh.normals[v] = per_vertex[v] >= 0 ? file_normals[size_t(per_vertex[v])] : Vec3{};
        }
    }
    validate_mesh(mesh);
    return mesh;
}

namespace {

struct PlyProperty {
    std::string type;  // scalar type, or list count type
    std::string list_type;
    std::string name;
    bool is_list = false;
};

struct PlyElement {
    std::string name;
    size_t count = 0;
    std::vector<PlyProperty> props;
};

size_t ply_type_size(const std::string& t, const std::string& name) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
        t == "float32")
        return 4;
    if (t == "double" || t == "float64" || t == "int64" || t == "uint64") return 8;
    throw InputError(name + ": unknown PLY type '" + t + "'");
}

double read_ply_scalar_binary(std::istream& in, const std::string& type, const std::string& name) {
    unsigned char buf[8];
    const size_t n = ply_type_size(type, name);
    if (!in.read(reinterpret_cast<char*>(buf), std::streamsize(n)))
        throw InputError(name + ": truncated PLY body");
    // Little-endian per format declaration.
    uint64_t u = 0;
    for (size_t i = 0; i < n; ++i) u |= uint64_t(buf[i]) << (8 * i);
    if (type == "float" || type == "float32") {
        float f;
        uint32_t u32 = uint32_t(u);
        std::memcpy(&f, &u32, 4);
        return double(f);
    }
    if (type == "double" || type == "float64") {
        double d;
        std::memcpy(&d, &u, 8);
        return d;
    }
    if (type == "char" || type == "int8") return double(int8_t(u));
    if (type == "short" || type == "int16") return double(int16_t(u));
    if (type == "int" || type == "int32") return double(int32_t(u));
    if (type == "int64") return double(int64_t(u));
    return double(u);
}

double read_ply_scalar_ascii(std::istream& in, const std::string& name) {
    double v;
    if (!(in >> v)) throw InputError(name + ": truncated PLY body");
    return v;
}

}  // namespace

TriMesh load_ply(std::istream& in, const std::string& name) {
    std::string line;
    size_t lineno = 0;
    if (!std::getline(in, line) || (line != "ply" && line != "ply\r"))
        parse_fail(name, 1, "not a PLY file");
    ++lineno;

    bool binary = false;
    std::vector<PlyElement> elements;
    for (;;) {
        if (!std::getline(in, line)) parse_fail(name, lineno, "unterminated PLY header");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment" || tag == "obj_info" || tag.empty()) continue;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "binary_little_endian") binary = true;
            else if (fmt == "ascii") binary = false;
            else parse_fail(name, lineno, "unsupported PLY format '" + fmt + "'");
        } else if (tag == "element") {
            PlyElement el;
            if (!(ls >> el.name >> el.count)) parse_fail(name, lineno, "bad element line");
            elements.push_back(el);
        } else if (tag == "property") {
            if (elements.empty()) parse_fail(name, lineno, "property before element");
            PlyProperty p;
            std::string t1;
            ls >> t1;
            if (t1 == "list") {
                p.is_list = true;
                if (!(ls >> p.type >> p.list_type >> p.name))
                    parse_fail(name, lineno, "bad list property");
            } else {
                p.type = t1;
                if (!(ls >> p.name)) parse_fail(name, lineno, "bad property");
            }
            elements.back().props.push_back(p);
        } else if (tag == "end_header") {
            break;
        } else {
            parse_fail(name, lineno, "unexpected header line '" + tag + "'");
        }
    }

    TriMesh mesh;
    auto read_scalar = [&](const std::string& type) {
        return binary ? read_ply_scalar_binary(in, type, name) : read_ply_scalar_ascii(in, name);
    };

    for (const PlyElement& el : elements) {
        if (el.name == "vertex") {
            int ix = -1, iy = -1, iz = -1;
            for (size_t p = 0; p < el.props.size(); ++p) {
                if (el.props[p].name == "x") ix = int(p);
                if (el.props[p].name == "y") iy = int(p);
                if (el.props[p].name == "z") iz = int(p);
            }
            if (ix < 0 || iy < 0 || iz < 0)
                throw InputError(name + ": PLY vertex element lacks x/y/z");
            mesh.vertices.reserve(el.count);
            for (size_t i = 0; i < el.count; ++i) {
                Vec3 v;
                for (size_t p = 0; p < el.props.size(); ++p) {
                    if (el.props[p].is_list)
                        throw InputError(name + ": list property on vertex element");
                    const double s = read_scalar(el.props[p].type);
                    if (int(p) == ix) v.x = s;
                    if (int(p) == iy) v.y = s;
                    if (int(p) == iz) v.z = s;
                }
                mesh.vertices.push_back(v);
            }
        } else if (el.name == "face") {
            mesh.faces.reserve(el.count);
            for (size_t i = 0; i < el.count; ++i) {
                for (const PlyProperty& p : el.props) {
                    if (p.is_list &&
                        (p.name == "vertex_indices" || p.name == "vertex_index")) {
                        const size_t n = size_t(read_scalar(p.type));
                        std::vector<uint32_t> poly(n);
                        for (size_t k = 0; k < n; ++k) {
                            const double idx = read_scalar(p.list_type);
                            if (idx < 0 || idx >= double(mesh.vertices.size()))
                                throw InputError(name + ": face index out of range");
                            poly[k] = uint32_t(idx);
                        }
                        if (n < 3) throw InputError(name + ": face with fewer than 3 corners");
                        fan_triangulate(mesh.faces, poly);
                    } else if (p.is_list) {
                        const size_t n = size_t(read_scalar(p.type));
                        for (size_t k = 0; k < n; ++k) read_scalar(p.list_type);
                    } else {
                        read_scalar(p.type);
                    }
                }
            }
        } else {
            // Unknown element: skip its payload.
            for (size_t i = 0; i < el.count; ++i)
                for (const PlyProperty& p : el.props) {
                    if (p.is_list) {
                        const size_t n = size_t(read_scalar(p.type));
                        for (size_t k = 0; k < n; ++k) read_scalar(p.list_type);
                    } else {
                        read_scalar(p.type);
                    }
                }
        }
    }
    validate_mesh(mesh);
    return mesh;
}

TriMesh load_mesh(const std::string& path) {
    const std::string ext = lower_ext(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open mesh file: " + path);
    if (ext == "obj") return load_obj(in, path);
    if (ext == "ply") return load_ply(in, path);
    throw InputError("unsupported mesh format '" + ext + "' for " + path);
}

void save_obj(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write mesh file: " + path);
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        out << buf;
    }
    const bool n = mesh.has_normals();
    if (n)
        for (const Vec3& vn : mesh.normals) {
            std::snprintf(buf, sizeof(buf), "vn %.9g %.9g %.9g\n", vn.x, vn.y, vn.z);
            out << buf;
        }
    for (const auto& f : mesh.faces) {
        if (n)
            std::snprintf(buf, sizeof(buf), "f %u//%u %u//%u %u//%u\n", f[0] + 1, f[0] + 1,
                          f[1] + 1, f[1] + 1, f[2] + 1, f[2] + 1);
        else
            std::snprintf(buf, sizeof(buf), "f %u %u %u\n", f[0] + 1, f[1] + 1, f[2] + 1);
        out << buf;
    }
    if (!out) throw Error("short write: " + path);
}

namespace {

void write_ply_impl(const TriMesh& mesh, const std::vector<std::array<uint8_t, 3>>* colors,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write mesh file: " + path);
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    if (colors)
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "element face " << mesh.faces.size() << "\n";
    out << "property list uchar uint vertex_indices\nend_header\n";
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const float p[3] = {float(mesh.vertices[i].x), float(mesh.vertices[i].y),
                            float(mesh.vertices[i].z)};
        out.write(reinterpret_cast<const char*>(p), 12);
        if (colors) out.write(reinterpret_cast<const char*>((*colors)[i].data()), 3);
    }
    for (const auto& f : mesh.faces) {
        const uint8_t n = 3;
        out.write(reinterpret_cast<const char*>(&n), 1);
        out.write(reinterpret_cast<const char*>(f.data()), 12);
    }
    if (!out) throw Error("short write: " + path);
}

}  // namespace

void save_ply(const TriMesh& mesh, const std::string& path) {
    write_ply_impl(mesh, nullptr, path);
}

void save_ply_colored(const TriMesh& mesh, const std::vector<std::array<uint8_t, 3>>& colors,
                      const std::string& path) {
    if (colors.size() != mesh.vertices.size())
        throw InputError("color count does not match vertex count");
    write_ply_impl(mesh, &colors, path);
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "obj") save_obj(mesh, path);
    else if (ext == "ply") save_ply(mesh, path);
    else throw InputError("unsupported mesh format '" + ext + "' for " + path);
}

}  // namespace tetshell
