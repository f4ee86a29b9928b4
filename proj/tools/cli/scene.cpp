#include "cli/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lkpolar/error.hpp"

namespace lkpolar::cli {

namespace {

std::string located(const std::string& source, int line, const std::string& msg) {
    if (line <= 0) return source + ": " + msg;
    return source + ":" + std::to_string(line) + ": " + msg;
}

// Lines of the '{' that open each element of the top-level "objects" array.
// Elements are the braces met at nesting depth 2 (root object, then array).
std::vector<int> object_lines(const std::string& text) {
    std::vector<int> lines;
    int depth = 0, line = 1;
    bool in_string = false, escaped = false;
    for (char c : text) {
        if (c == '\n') ++line;
        if (in_string) {
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
            continue;
        }
        switch (c) {
        case '"': in_string = true; break;
        case '{':
        case '[':
            if (c == '{' && depth == 2) lines.push_back(line);
            ++depth;
            break;
        case '}':
        case ']': --depth; break;
        default: break;
        }
    }
    return lines;
}

Vector parse_vector(const Json& j, int dim, const std::string& what) {
    if (!j.is_array()) throw SceneError(what + " must be an array of numbers");
    if (static_cast<int>(j.size()) != dim)
        throw SceneError(what + " has " + std::to_string(j.size()) + " coordinates, expected " + std::to_string(dim));
    Vector v(dim);
    for (int k = 0; k < dim; ++k) {
        const Json& x = j[static_cast<std::size_t>(k)];
        if (!x.is_number()) throw SceneError(what + " contains a non-number");
        v[k] = x.get<double>();
        if (!std::isfinite(v[k])) throw SceneError(what + " contains a non-finite number");
    }
    return v;
}

std::vector<Vector> parse_points(const Json& j, int dim, const std::string& what) {
    if (!j.is_array()) throw SceneError(what + " must be an array of vectors");
    std::vector<Vector> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(parse_vector(j[k], dim, what + "[" + std::to_string(k) + "]"));
    return out;
}

ObjectKind parse_kind(const Json& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "cone") return ObjectKind::cone;
        if (s == "union") return ObjectKind::union_;
        if (s == "polytope") return ObjectKind::polytope;
    }
    throw SceneError("\"kind\" must be one of cone, union, polytope");
}

void dump(const Json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += inner + Json(it.key()).dump() + ": ";
            dump(it.value(), indent + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += pad + "}";
    } else if (j.is_array()) {
        bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
        if (j.empty()) {
            out += "[]";
        } else if (flat) {
            out += "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ", ";
                dump(j[k], indent + 1, out);
            }
            out += "]";
        } else {
            out += "[\n";
            for (std::size_t k = 0; k < j.size(); ++k) {
                out += inner;
                dump(j[k], indent + 1, out);
                out += k + 1 < j.size() ? ",\n" : "\n";
            }
            out += pad + "]";
        }
    } else if (j.is_number_float()) {
        out += format_number(j.get<double>());
    } else {
        out += j.dump();
    }
}

}  // namespace

const char* to_string(ObjectKind k) noexcept {
    switch (k) {
    case ObjectKind::cone: return "cone";
    case ObjectKind::union_: return "union";
    case ObjectKind::polytope: return "polytope";
    }
    return "unknown";
}

const SceneObject* SceneFile::find(const std::string& name) const {
    for (const auto& o : objects)
        if (o.name == name) return &o;
    return nullptr;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump_json(const Json& j) {
    std::string out;
    dump(j, 0, out);
    out += "\n";
    return out;
}

SceneObject make_object(std::string name, ObjectKind kind, int ambient_dim,
                        std::vector<std::vector<Vector>> data) {
    SceneObject obj;
    obj.name = std::move(name);
    obj.kind = kind;
    obj.ambient_dim = ambient_dim;
    switch (kind) {
    case ObjectKind::cone:
        obj.geometry = cone_from_generators(data.front(), ambient_dim);
        break;
    case ObjectKind::union_: {
        std::vector<ConvexCone> members;
        for (const auto& m : data) members.push_back(cone_from_generators(m, ambient_dim));
        obj.geometry = PolyUnion(std::move(members));
        break;
    }
    case ObjectKind::polytope:
        if (data.front().empty()) throw Error(ErrorCode::EmptyCone, "polytope needs at least one vertex");
        obj.geometry = homogenize(data.front());
        break;
    }
    obj.data = std::move(data);
    return obj;
}

SceneFile parse_scene(const std::string& text, const std::string& source) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        int line = 1;
        for (std::size_t k = 0; k < std::min<std::size_t>(e.byte, text.size()); ++k)
            if (text[k] == '\n') ++line;
        throw SceneError(located(source, line, "parse error: " + std::string(e.what())));
    }
    if (!root.is_object()) throw SceneError(located(source, 1, "top level must be an object"));
    if (!root.contains("version") || !root["version"].is_number_integer() || root["version"].get<int>() != 1)
        throw SceneError(located(source, 1, "\"version\" must be the integer 1"));
    if (!root.contains("objects") || !root["objects"].is_array())
        throw SceneError(located(source, 1, "\"objects\" must be an array"));

    const std::vector<int> lines = object_lines(text);
    SceneFile scene;
    std::set<std::string> names;
    const Json& objects = root["objects"];
    for (std::size_t k = 0; k < objects.size(); ++k) {
        const int line = k < lines.size() ? lines[k] : 0;
        const Json& o = objects[k];
        try {
            if (!o.is_object()) throw SceneError("object must be a JSON object");
            if (!o.contains("name") || !o["name"].is_string() || o["name"].get<std::string>().empty())
                throw SceneError("\"name\" must be a non-empty string");
            std::string name = o["name"].get<std::string>();
            if (!names.insert(name).second) throw SceneError("duplicate object name \"" + name + "\"");
            if (!o.contains("kind")) throw SceneError("missing \"kind\"");
            ObjectKind kind = parse_kind(o["kind"]);
            if (!o.contains("ambient_dim") || !o["ambient_dim"].is_number_integer() ||
                o["ambient_dim"].get<int>() < 1)
                throw SceneError("\"ambient_dim\" must be a positive integer");
            const int dim = o["ambient_dim"].get<int>();
            if (!o.contains("data")) throw SceneError("missing \"data\"");
            std::vector<std::vector<Vector>> data;
            if (kind == ObjectKind::union_) {
                const Json& d = o["data"];
                if (!d.is_array() || d.empty()) throw SceneError("union \"data\" must be a non-empty array of members");
                for (std::size_t m = 0; m < d.size(); ++m)
                    data.push_back(parse_points(d[m], dim, "data[" + std::to_string(m) + "]"));
            } else {
                data.push_back(parse_points(o["data"], dim, "data"));
            }
            SceneObject obj = make_object(std::move(name), kind, dim, std::move(data));
            obj.line = line;
            scene.objects.push_back(std::move(obj));
        } catch (const SceneError& e) {
            throw SceneError(located(source, line, e.what()));
        } catch (const Error& e) {
            if (e.is_numerical()) throw;
            throw SceneError(located(source, line, e.what()));
        }
    }
    return scene;
}

SceneFile load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str(), path);
}

Json scene_to_json(const SceneFile& scene) {
    auto points = [](const std::vector<Vector>& pts) {
        Json arr = Json::array();
        for (const auto& p : pts) {
            Json v = Json::array();
            for (Eigen::Index c = 0; c < p.size(); ++c) v.push_back(p[c]);
            arr.push_back(std::move(v));
        }
        return arr;
    };
    Json root;
    root["version"] = scene.version;
    root["objects"] = Json::array();
    for (const auto& o : scene.objects) {
        Json j;
        j["name"] = o.name;
        j["kind"] = to_string(o.kind);
        j["ambient_dim"] = o.ambient_dim;
        if (o.kind == ObjectKind::union_) {
            j["data"] = Json::array();
            for (const auto& m : o.data) j["data"].push_back(points(m));
        } else {
            j["data"] = points(o.data.front());
        }
        root["objects"].push_back(std::move(j));
    }
    return root;
}

std::string save_scene(const SceneFile& scene) { return dump_json(scene_to_json(scene)); }

}  // namespace lkpolar::cli
