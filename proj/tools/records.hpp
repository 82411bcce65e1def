#pragma once

// JSON encodings shared by the subcommands and the self-test.

#include "nilhom/free_lie.hpp"
#include "nilhom/lie_homology.hpp"
#include "nilhom/rep.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace nilhom::cli {

using Json = nlohmann::ordered_json;

inline std::string rat(const linalg::Rational& q) {
    return q.get_str();
}

/// [{"word": "12", "coeff": "1/2"}, ...] in basis order.
inline Json terms_json(const lie::LieElement& a) {
    Json out = Json::array();
    for (const auto& [i, x] : a.coords())
        out.push_back({{"word", lie::format_word(a.basis()->element(i).word)}, {"coeff", rat(x)}});
    return out;
}

inline Json weights_json(const std::map<lie::Weight, std::size_t>& w) {
    Json out = Json::array();
    for (const auto& [weight, mult] : w) out.push_back({{"weight", weight}, {"multiplicity", mult}});
    return out;
}

inline Json gl2_json(const rep::Gl2Decomposition& d) {
    Json out = Json::array();
    for (const auto& [hw, mult] : d) out.push_back({{"highest_weight", {hw.first, hw.second}}, {"multiplicity", mult}});
    return out;
}

struct SelfCheck {
    std::string name;
    /// Result object; its "passed" member is the verdict.
    std::function<Json()> run;
};

const std::vector<SelfCheck>& self_checks();

}  // namespace nilhom::cli
