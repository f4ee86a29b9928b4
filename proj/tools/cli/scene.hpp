#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lkpolar/polycone.hpp"

namespace lkpolar::cli {

using Json = nlohmann::ordered_json;

enum class ObjectKind { cone, union_, polytope };

const char* to_string(ObjectKind k) noexcept;

/// One named object. `data` keeps the raw coordinates so a loaded file can be
/// written back unchanged; `geometry` holds the validated form.
struct SceneObject {
    std::string name;
    ObjectKind kind = ObjectKind::cone;
    int ambient_dim = 0;
    int line = 0;  // line of the object's opening brace in the source file
    std::vector<std::vector<Vector>> data;  // members; one member for cones and polytopes
    std::variant<ConvexCone, PolyUnion, Polytope> geometry;
};

struct SceneFile {
    int version = 1;
    std::vector<SceneObject> objects;

    const SceneObject* find(const std::string& name) const;
};

/// Raised for malformed or invalid input. `what()` is already prefixed with
/// "path:line:" when a line is known.
class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SceneFile parse_scene(const std::string& text, const std::string& source = "<input>");
SceneFile load_scene(const std::string& path);

Json scene_to_json(const SceneFile& scene);
std::string save_scene(const SceneFile& scene);

/// Builds and validates the geometry for raw coordinates.
SceneObject make_object(std::string name, ObjectKind kind, int ambient_dim,
                        std::vector<std::vector<Vector>> data);

/// Serializes with two-space indentation, vectors of numbers on one line and
/// every floating-point number printed with 17 significant digits.
std::string dump_json(const Json& j);

std::string format_number(double x);

}  // namespace lkpolar::cli
