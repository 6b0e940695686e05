#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ars/scene.hpp"

namespace ars {

// Scene document, version "v1": structured UTF-8 text (JSON). Belief is
// optional and run-length encoded. See README for the schema.
inline nlohmann::json save_scene(const Scene& scene, bool include_belief = false) {
    nlohmann::json doc;
    doc["version"] = "v1";
    doc["spec"] = {{"dims", {scene.spec.dims.x, scene.spec.dims.y, scene.spec.dims.z}},
                   {"resolution", scene.spec.resolution},
                   {"origin", {scene.spec.origin.x, scene.spec.origin.y, scene.spec.origin.z}}};
    nlohmann::json objs = nlohmann::json::array();
    for (const SceneObject& o : scene.objects) {
        objs.push_back({{"id", o.id},
                        {"shape", o.shape == ShapeKind::Cylinder ? "cylinder" : "box"},
                        {"pose",
                         {{"position", {o.pose.position.x, o.pose.position.y, o.pose.position.z}},
                          {"yaw", o.pose.yaw}}},
                        {"size", {o.size.x, o.size.y, o.size.z}},
                        {"color_label", o.color_label},
                        {"shape_label", o.shape_label},
                        {"category", o.category == SizeCategory::Large ? "large" : "small"}});
    }
    doc["objects"] = std::move(objs);
    doc["staging"] = scene.staging;
    if (include_belief) {
        nlohmann::json rle = nlohmann::json::array();
        size_t i = 0;
        const auto& st = scene.belief.states;
        while (i < st.size()) {
            size_t j = i;
            while (j < st.size() && st[j] == st[i]) ++j;
            rle.push_back({j - i, static_cast<int>(st[i])});
            i = j;
        }
        doc["belief"] = {{"encoding", "rle"}, {"runs", std::move(rle)}};
    }
    return doc;
}

namespace detail {

template <typename T>
T get_field(const nlohmann::json& j, const char* field) {
    if (!j.contains(field))
        throw MalformedDocument(std::string("scene document: missing field '") + field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedDocument(std::string("scene document: bad field '") + field +
                                "': " + e.what());
    }
}

inline Vec3 get_vec3(const nlohmann::json& j, const char* field) {
    const auto arr = get_field<std::vector<double>>(j, field);
    if (arr.size() != 3)
        throw MalformedDocument(std::string("scene document: field '") + field +
                                "' must have 3 entries");
    return {arr[0], arr[1], arr[2]};
}

}  // namespace detail

inline Scene load_scene(const nlohmann::json& doc) {
    using detail::get_field;
    if (get_field<std::string>(doc, "version") != "v1")
        throw MalformedDocument("scene document: unsupported version");
    const nlohmann::json& jspec = doc.contains("spec")
                                      ? doc.at("spec")
                                      : throw MalformedDocument("scene document: missing 'spec'");
    GridSpec spec;
    const auto dims = get_field<std::vector<int>>(jspec, "dims");
    if (dims.size() != 3) throw MalformedDocument("scene document: spec.dims must have 3 entries");
    spec.dims = {dims[0], dims[1], dims[2]};
    spec.resolution = get_field<double>(jspec, "resolution");
    spec.origin = detail::get_vec3(jspec, "origin");
    try {
        spec.validate();
    } catch (const Error& e) {
        throw MalformedDocument(std::string("scene document: ") + e.what());
    }

    Scene scene = Scene::empty(spec);
    if (!doc.contains("objects")) throw MalformedDocument("scene document: missing 'objects'");
    int expected_id = 0;
    for (const auto& jo : doc.at("objects")) {
        SceneObject o;
        o.id = detail::get_field<int>(jo, "id");
        if (o.id != expected_id++)
            throw MalformedDocument("scene document: object ids must be sequential from 0");
        const auto shape = detail::get_field<std::string>(jo, "shape");
        if (shape == "box") o.shape = ShapeKind::Box;
        else if (shape == "cylinder") o.shape = ShapeKind::Cylinder;
        else throw MalformedDocument("scene document: unknown shape '" + shape + "'");
        if (!jo.contains("pose")) throw MalformedDocument("scene document: object missing 'pose'");
        o.pose.position = detail::get_vec3(jo.at("pose"), "position");
        o.pose.yaw = detail::get_field<double>(jo.at("pose"), "yaw");
        const Vec3 size = detail::get_vec3(jo, "size");
        o.size = size;
        o.color_label = detail::get_field<std::string>(jo, "color_label");
        o.shape_label = detail::get_field<std::string>(jo, "shape_label");
        const auto cat = detail::get_field<std::string>(jo, "category");
        if (cat == "large") o.category = SizeCategory::Large;
        else if (cat == "small") o.category = SizeCategory::Small;
        else throw MalformedDocument("scene document: unknown category '" + cat + "'");
        if (!scene.try_add_object(o))
            throw MalformedDocument("scene document: object " + std::to_string(o.id) +
                                    " overlaps another object or leaves the grid");
    }
    if (doc.contains("staging"))
        for (int id : doc.at("staging").get<std::vector<int>>()) scene.remove_object(id);
    if (doc.contains("belief")) {
        const auto& jb = doc.at("belief");
        if (detail::get_field<std::string>(jb, "encoding") != "rle")
            throw MalformedDocument("scene document: unknown belief encoding");
        size_t i = 0;
        for (const auto& run : jb.at("runs")) {
            const size_t n = run.at(0).get<size_t>();
            const int s = run.at(1).get<int>();
            if (s < 0 || s > 2) throw MalformedDocument("scene document: bad belief state");
            if (i + n > scene.belief.states.size())
                throw MalformedDocument("scene document: belief runs exceed grid size");
            std::fill_n(scene.belief.states.begin() + i, n, static_cast<BeliefState>(s));
            i += n;
        }
        if (i != scene.belief.states.size())
            throw MalformedDocument("scene document: belief runs do not cover the grid");
    }
    return scene;
}

inline void save_scene_file(const Scene& scene, const std::string& path,
                            bool include_belief = false) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << save_scene(scene, include_belief).dump(2) << "\n";
}

inline Scene load_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scene file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedDocument(std::string("scene document: ") + e.what());
    }
    return load_scene(doc);
}

// Belief snapshot, format "ars-belief v1": text header (dims) followed by
// run-length encoded states, one "count state" pair per line.
inline void dump_belief(const VoxelBelief& belief, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << "ars-belief v1\n";
    out << belief.dims.x << " " << belief.dims.y << " " << belief.dims.z << "\n";
    size_t i = 0;
    while (i < belief.states.size()) {
        size_t j = i;
        while (j < belief.states.size() && belief.states[j] == belief.states[i]) ++j;
        out << (j - i) << " " << static_cast<int>(belief.states[i]) << "\n";
        i = j;
    }
}

inline VoxelBelief load_belief(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open belief file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "ars-belief v1") throw MalformedDocument("belief file: bad header");
    VoxelBelief b;
    in >> b.dims.x >> b.dims.y >> b.dims.z;
    if (!in || b.dims.x < 1 || b.dims.y < 1 || b.dims.z < 1)
        throw MalformedDocument("belief file: bad dims");
    const size_t total = static_cast<size_t>(b.dims.x) * b.dims.y * b.dims.z;
    b.states.reserve(total);
    size_t n;
    int s;
    while (in >> n >> s) {
        if (s < 0 || s > 2 || b.states.size() + n > total)
            throw MalformedDocument("belief file: bad run");
        b.states.insert(b.states.end(), n, static_cast<BeliefState>(s));
    }
    if (b.states.size() != total) throw MalformedDocument("belief file: runs do not cover grid");
    return b;
}

}  // namespace ars
