#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ars/scene.hpp"

namespace ars {

enum class Direction : uint8_t { Left = 0, Right = 1, Behind = 2, Front = 3 };

inline const char* direction_name(Direction d) {
    switch (d) {
        case Direction::Left: return "left";
        case Direction::Right: return "right";
        case Direction::Behind: return "behind";
        case Direction::Front: return "front";
    }
    return "?";
}

struct PromptParse {
    std::vector<std::string> anchor_tokens;  // lowercase, determiners stripped
    Direction direction = Direction::Left;
};

namespace detail {

inline std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

inline const std::unordered_map<std::string, Direction>& direction_synonyms() {
    static const std::unordered_map<std::string, Direction> map{
        {"left", Direction::Left},     {"right", Direction::Right},
        {"behind", Direction::Behind}, {"back", Direction::Behind},
        {"rear", Direction::Behind},   {"front", Direction::Front},
        {"before", Direction::Front},  {"ahead", Direction::Front}};
    return map;
}

inline bool is_preposition(const std::string& t) {
    static const std::unordered_set<std::string> set{"of", "behind", "before", "ahead"};
    return set.count(t) > 0;
}

inline bool is_determiner(const std::string& t) {
    static const std::unordered_set<std::string> set{"the", "a",  "an",  "this", "that",
                                                     "my",  "your", "his", "her",  "their"};
    return set.count(t) > 0;
}

}  // namespace detail

// Rule-based prompt reader: the first direction-synonym token fixes the
// spatial direction; the anchor description is everything after the last
// preposition, minus determiners.
inline PromptParse parse_prompt(const std::string& text) {
    const std::vector<std::string> tokens = detail::tokenize_lower(text);
    if (tokens.empty()) throw NoDirectionFound("empty prompt");

    PromptParse parse;
    bool found = false;
    for (const std::string& t : tokens) {
        const auto it = detail::direction_synonyms().find(t);
        if (it != detail::direction_synonyms().end()) {
            parse.direction = it->second;
            found = true;
            break;
        }
    }
    if (!found) throw NoDirectionFound("no supported direction in prompt: " + text);

    size_t last_prep = tokens.size();
    for (size_t i = 0; i < tokens.size(); ++i)
        if (detail::is_preposition(tokens[i])) last_prep = i;
    if (last_prep == tokens.size())
        throw NoAnchorFound("no preposition introducing an anchor in prompt: " + text);
    for (size_t i = last_prep + 1; i < tokens.size(); ++i)
        if (!detail::is_determiner(tokens[i])) parse.anchor_tokens.push_back(tokens[i]);
    if (parse.anchor_tokens.empty())
        throw NoAnchorFound("no anchor tokens after preposition in prompt: " + text);
    return parse;
}

namespace detail {

inline bool object_visible(const Scene& scene, const SceneObject& obj) {
    if (!obj.present) return false;
    for (uint32_t v : obj.voxels)
        if (scene.belief.states[v] == BeliefState::ObservedOccupied) return true;
    return false;
}

}  // namespace detail

// Grounds the anchor description to the observed object with maximal token
// overlap against {color_label, shape_label}; ties break to the smaller id.
inline int32_t resolve_anchor(const PromptParse& parse, const Scene& scene) {
    int32_t best_id = -1;
    int best_overlap = 0;
    for (const SceneObject& obj : scene.objects) {
        if (!detail::object_visible(scene, obj)) continue;
        int overlap = 0;
        for (const std::string& t : parse.anchor_tokens)
            if (t == obj.color_label || t == obj.shape_label) ++overlap;
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best_id = obj.id;
        }
    }
    if (best_id < 0)
        throw AnchorNotVisible("no observed object matches the anchor description");
    return best_id;
}

// Expands from the anchor's bounding-box face to the grid boundary along the
// requested direction; the other two axes span the whole grid. The anchor's
// own voxels are excluded by construction.
inline RoiBox build_roi(const Scene& scene, int32_t anchor_id, Direction dir) {
    const SceneObject& anchor = scene.object(anchor_id);
    if (!anchor.present) throw UnknownObject("build_roi: anchor object is staged");
    Index3 blo, bhi;
    anchor.voxel_bbox(scene.spec, &blo, &bhi);
    const Index3 dims = scene.spec.dims;

    RoiBox roi{{0, 0, 0}, {dims.x - 1, dims.y - 1, dims.z - 1}};
    switch (dir) {
        case Direction::Left:
            if (blo.x == 0) throw EmptyRoi("anchor flush with the left boundary");
            roi.hi.x = blo.x - 1;
            break;
        case Direction::Right:
            if (bhi.x == dims.x - 1) throw EmptyRoi("anchor flush with the right boundary");
            roi.lo.x = bhi.x + 1;
            break;
        case Direction::Front:
            if (blo.y == 0) throw EmptyRoi("anchor flush with the front boundary");
            roi.hi.y = blo.y - 1;
            break;
        case Direction::Behind:
            if (bhi.y == dims.y - 1) throw EmptyRoi("anchor flush with the back boundary");
            roi.lo.y = bhi.y + 1;
            break;
    }
    roi.validate(scene.spec);
    return roi;
}

}  // namespace ars
