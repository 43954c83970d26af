#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ocnreg/constraints.hpp"
#include "ocnreg/geometry.hpp"
#include "ocnreg/graph.hpp"
#include "ocnreg/matrix.hpp"
#include "ocnreg/protocol.hpp"
#include "ocnreg/weights.hpp"

namespace ocnreg {

namespace detail {

/**
 * Key-exact view of a JSON object. Every key must be consumed through
 * it; done() rejects leftovers with their dotted path, so a typo in a
 * scenario file fails loudly instead of silently falling back to a
 * default.
 */
class StrictObject {
public:
    StrictObject(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw std::invalid_argument(path_ + ": expected an object");
    }

    const nlohmann::json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const nlohmann::json& need(const std::string& key) {
        const nlohmann::json* p = find(key);
        if (!p) throw std::invalid_argument(path_ + "." + key + ": missing");
        return *p;
    }

    double need_double(const std::string& key) {
        const auto& v = need(key);
        if (!v.is_number()) throw std::invalid_argument(path_ + "." + key + ": expected a number");
        return v.get<double>();
    }

    double opt_double(const std::string& key, double fallback) {
        const nlohmann::json* p = find(key);
        if (!p) return fallback;
        if (!p->is_number()) throw std::invalid_argument(path_ + "." + key + ": expected a number");
        return p->get<double>();
    }

    int need_int(const std::string& key) {
        const auto& v = need(key);
        if (!v.is_number_integer())
            throw std::invalid_argument(path_ + "." + key + ": expected an integer");
        return v.get<int>();
    }

    std::string need_string(const std::string& key) {
        const auto& v = need(key);
        if (!v.is_string()) throw std::invalid_argument(path_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }

    bool opt_bool(const std::string& key, bool fallback) {
        const nlohmann::json* p = find(key);
        if (!p) return fallback;
        if (!p->is_boolean())
            throw std::invalid_argument(path_ + "." + key + ": expected a boolean");
        return p->get<bool>();
    }

    void done() {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw std::invalid_argument(path_ + "." + it.key() + ": unknown key");
    }

    const std::string& path() const { return path_; }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace detail

struct InitSpec {
    enum class Kind { Random, Explicit };
    Kind kind = Kind::Random;
    double max_abs_offset = 0.0;  // random draws are scaled to this infinity norm
    Vec offsets;                  // explicit form
};

/**
 * @brief A fully resolved scenario file.
 *
 * nominal holds the rate limits as designed; active additionally
 * carries any fault windows. A run is controlled by the active limits,
 * while the nominal ones only feed the expected-range reporting.
 */
struct Scenario {
    std::string name;
    JunctionNetwork network;
    std::vector<ChannelShape> shapes;
    std::vector<double> set_points;
    RateLimits nominal;
    RateLimits active;
    double gamma = 0.0;
    int k_max = 0;
    double blend_fallback = 0.0;
    double step_seconds = 1.0;
    InitSpec init;
    bool shared_profiles = false;
    bool embed_requested = false;
    bool uniform_geometry = false;
    bool uniform_limits = false;
    bool has_faults = false;

    std::size_t channel_count() const { return network.channels.size(); }

    // closed interval the level offset of channel i must stay inside
    std::pair<double, double> service_band(int i) const {
        const auto idx = static_cast<std::size_t>(i);
        return {-set_points[idx], shapes[idx].level_span - set_points[idx]};
    }

    std::vector<std::pair<double, double>> service_bands() const {
        std::vector<std::pair<double, double>> b;
        b.reserve(channel_count());
        for (std::size_t i = 0; i < channel_count(); ++i)
            b.push_back(service_band(static_cast<int>(i)));
        return b;
    }
};

namespace detail {

inline ChannelShape parse_shape(const nlohmann::json& j, const std::string& path,
                                double& set_point) {
    StrictObject o(j, path);
    ChannelShape s;
    s.length = o.need_double("length");
    s.bed_width = o.need_double("bed_width");
    s.wall_angle = o.need_double("wall_angle_deg") * 3.14159265358979323846 / 180.0;
    s.level_span = o.need_double("level_span");
    set_point = o.need_double("set_point");
    o.done();
    s.validate();
    if (!(set_point > 0.0) || !(set_point < s.level_span))
        throw std::invalid_argument(path + ".set_point: must lie strictly inside the level span");
    return s;
}

inline RateProfile parse_profile(const nlohmann::json& j, const std::string& path,
                                 const ChannelShape& shape, double set_point,
                                 double step_seconds, bool& involves_geometry) {
    StrictObject o(j, path);
    const std::string kind = o.need_string("kind");
    RateProfile p = RateProfile::constant(1.0);
    if (kind == "constant") {
        p = RateProfile::constant(o.need_double("value"));
    } else if (kind == "waveform") {
        const double amplitude = o.need_double("amplitude");
        const double decay = o.need_double("decay");
        const double clamp = o.opt_double("clamp", 0.6825);
        p = RateProfile::waveform(amplitude, decay, clamp);
    } else if (kind == "flow_capacity") {
        // volumetric gate capacity, converted to a level rate at the set point
        const double flow = o.need_double("flow");
        if (!(flow > 0.0)) throw std::invalid_argument(path + ".flow: must be positive");
        p = RateProfile::constant(
            shape.level_rate_from_flow(flow * step_seconds, set_point));
        involves_geometry = true;
    } else {
        throw std::invalid_argument(path + ".kind: unknown profile kind '" + kind + "'");
    }
    o.done();
    return p;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

/**
 * Parse and validate a scenario. base_dir anchors relative paths named
 * inside the file. Unknown keys anywhere are an error.
 */
inline Scenario load_scenario(const std::string& json_text, const std::string& base_dir) {
    nlohmann::json root_json;
    try {
        root_json = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario is not valid JSON: ") + e.what());
    }
    detail::StrictObject root(root_json, "scenario");

    Scenario sc;
    sc.name = root.need_string("name");

    {
        detail::StrictObject topo(root.need("topology"), "scenario.topology");
        const std::string kind = topo.need_string("kind");
        if (kind == "complete") {
            sc.network = JunctionNetwork::complete(topo.need_int("junctions"));
        } else if (kind == "edge_list") {
            const int junctions = topo.need_int("junctions");
            const auto& edges = topo.need("edges");
            if (!edges.is_array())
                throw std::invalid_argument("scenario.topology.edges: expected an array");
            std::vector<std::pair<int, int>> pairs;
            for (const auto& e : edges) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                    !e[1].is_number_integer())
                    throw std::invalid_argument(
                        "scenario.topology.edges: each entry must be a pair of junction numbers");
                pairs.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
            sc.network = JunctionNetwork::from_edges(junctions, std::move(pairs));
        } else if (kind == "edge_list_file") {
            const std::string rel = topo.need_string("path");
            const std::string full = base_dir.empty() ? rel : base_dir + "/" + rel;
            sc.network = JunctionNetwork::from_edge_list_text(detail::read_text_file(full));
        } else {
            throw std::invalid_argument("scenario.topology.kind: unknown kind '" + kind + "'");
        }
        topo.done();
    }
    const std::size_t n = sc.network.channels.size();

    {
        detail::StrictObject proto(root.need("protocol"), "scenario.protocol");
        sc.gamma = proto.need_double("gamma");
        sc.k_max = proto.need_int("k_max");
        sc.blend_fallback = proto.opt_double("blend_fallback", 0.001);
        sc.step_seconds = proto.opt_double("step_seconds", 1.0);
        proto.done();
        if (!(sc.gamma > 0.0)) throw std::invalid_argument("scenario.protocol.gamma: must be positive");
        if (sc.k_max < 1) throw std::invalid_argument("scenario.protocol.k_max: must be positive");
        if (!(sc.blend_fallback > 0.0) || !(sc.blend_fallback < 1.0))
            throw std::invalid_argument("scenario.protocol.blend_fallback: must lie in (0, 1)");
        if (!(sc.step_seconds > 0.0))
            throw std::invalid_argument("scenario.protocol.step_seconds: must be positive");
    }

    {
        detail::StrictObject geo(root.need("geometry"), "scenario.geometry");
        if (const nlohmann::json* u = geo.find("uniform")) {
            double sp = 0.0;
            ChannelShape shape = detail::parse_shape(*u, "scenario.geometry.uniform", sp);
            sc.shapes.assign(n, shape);
            sc.set_points.assign(n, sp);
            sc.uniform_geometry = true;
        } else if (const nlohmann::json* per = geo.find("per_channel")) {
            if (!per->is_array() || per->size() != n)
                throw std::invalid_argument(
                    "scenario.geometry.per_channel: expected one entry per channel (" +
                    std::to_string(n) + ")");
            for (std::size_t i = 0; i < n; ++i) {
                double sp = 0.0;
                sc.shapes.push_back(detail::parse_shape(
                    (*per)[i], "scenario.geometry.per_channel[" + std::to_string(i) + "]", sp));
                sc.set_points.push_back(sp);
            }
            sc.uniform_geometry = false;
        } else {
            throw std::invalid_argument("scenario.geometry: needs 'uniform' or 'per_channel'");
        }
        geo.done();
    }

    {
        detail::StrictObject lim(root.need("limits"), "scenario.limits");
        bool geometry_in_limits = false;
        auto parse_side = [&](const std::string& side) {
            const nlohmann::json& j = lim.need(side);
            std::vector<RateProfile> out;
            if (j.is_array()) {
                if (j.size() != n)
                    throw std::invalid_argument("scenario.limits." + side +
                                                ": expected one profile per channel (" +
                                                std::to_string(n) + ")");
                for (std::size_t i = 0; i < n; ++i)
                    out.push_back(detail::parse_profile(
                        j[i], "scenario.limits." + side + "[" + std::to_string(i) + "]",
                        sc.shapes[i], sc.set_points[i], sc.step_seconds, geometry_in_limits));
                sc.uniform_limits = false;
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    bool geom = false;
                    out.push_back(detail::parse_profile(j, "scenario.limits." + side,
                                                        sc.shapes[i], sc.set_points[i],
                                                        sc.step_seconds, geom));
                    geometry_in_limits = geometry_in_limits || geom;
                }
            }
            return out;
        };
        sc.uniform_limits = true;
        sc.nominal.down = parse_side("down");
        sc.nominal.up = parse_side("up");
        lim.done();
        sc.nominal.validate();
        if (geometry_in_limits && !sc.uniform_geometry) sc.uniform_limits = false;
    }

    sc.active = sc.nominal;
    if (const nlohmann::json* faults = root.find("faults")) {
        if (!faults->is_array()) throw std::invalid_argument("scenario.faults: expected an array");
        for (std::size_t fi = 0; fi < faults->size(); ++fi) {
            const std::string path = "scenario.faults[" + std::to_string(fi) + "]";
            detail::StrictObject f((*faults)[fi], path);
            const auto& ch = f.need("channel");
            if (!ch.is_array() || ch.size() != 2 || !ch[0].is_number_integer() ||
                !ch[1].is_number_integer())
                throw std::invalid_argument(path + ".channel: expected a junction pair [u, v]");
            const int idx = sc.network.channel_index(ch[0].get<int>(), ch[1].get<int>());
            if (idx < 0)
                throw std::invalid_argument(path + ".channel: no channel joins those junctions");
            const std::string dir = f.need_string("direction");
            const int from = f.need_int("from_step");
            const int to = f.need_int("to_step");
            const double value = f.need_double("value");
            f.done();
            if (from < 0 || to < from)
                throw std::invalid_argument(path + ": fault window is empty or negative");
            const auto ui = static_cast<std::size_t>(idx);
            if (dir == "down" || dir == "both")
                sc.active.down[ui] = sc.active.down[ui].overridden(from, to, value);
            if (dir == "up" || dir == "both")
                sc.active.up[ui] = sc.active.up[ui].overridden(from, to, value);
            if (dir != "down" && dir != "up" && dir != "both")
                throw std::invalid_argument(path + ".direction: must be down, up or both");
            sc.has_faults = true;
        }
    }

    {
        detail::StrictObject init(root.need("init"), "scenario.init");
        const std::string kind = init.need_string("kind");
        if (kind == "random") {
            sc.init.kind = InitSpec::Kind::Random;
            sc.init.max_abs_offset = init.need_double("max_abs_offset");
            if (!(sc.init.max_abs_offset > 0.0))
                throw std::invalid_argument("scenario.init.max_abs_offset: must be positive");
        } else if (kind == "explicit") {
            sc.init.kind = InitSpec::Kind::Explicit;
            const auto& offs = init.need("offsets");
            if (!offs.is_array() || offs.size() != n)
                throw std::invalid_argument("scenario.init.offsets: expected one value per channel (" +
                                            std::to_string(n) + ")");
            for (const auto& v : offs) {
                if (!v.is_number())
                    throw std::invalid_argument("scenario.init.offsets: entries must be numbers");
                sc.init.offsets.push_back(v.get<double>());
            }
        } else {
            throw std::invalid_argument("scenario.init.kind: unknown kind '" + kind + "'");
        }
        init.done();
    }

    if (const nlohmann::json* opts = root.find("options")) {
        detail::StrictObject o(*opts, "scenario.options");
        sc.shared_profiles = o.opt_bool("shared_profiles", false);
        sc.embed_requested = o.opt_bool("embed_into_complete", false);
        o.done();
    }

    root.done();
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    std::string dir = ".";
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) dir = path.substr(0, slash);
    return load_scenario(detail::read_text_file(path), dir);
}

/**
 * Initial level offsets for a run. Random draws spell out the mapping
 * from raw engine words because distribution adapters differ between
 * standard libraries and the draw must reproduce everywhere: each
 * double is (word >> 11) * 2^-53 mapped to [-1, 1), the vector is
 * shifted to zero mean and scaled to the configured infinity norm.
 */
inline Vec initial_offsets(const Scenario& sc, std::uint64_t seed) {
    const std::size_t n = sc.channel_count();
    Vec x(n);
    if (sc.init.kind == InitSpec::Kind::Explicit) {
        x = sc.init.offsets;
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            x[i] = 2.0 * u - 1.0;
        }
        const double m = mean(x);
        for (double& v : x) v -= m;
        const double norm = infinity_norm(x);
        if (!(norm > 0.0)) throw std::runtime_error("degenerate random draw");
        const double scale = sc.init.max_abs_offset / norm;
        for (double& v : x) v *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto band = sc.service_band(static_cast<int>(i));
        if (x[i] < band.first || x[i] > band.second)
            throw std::invalid_argument("initial offset of channel " + std::to_string(i) +
                                        " lies outside its service band");
    }
    return x;
}

/**
 * Re-plant a scenario onto the complete network over the same
 * junctions, carrying the given initial state with it: a channel keeps
 * its offset under its junction pair, channels that only exist in the
 * complete network start at the set point. The offsets stay zero mean
 * and keep their infinity norm, so runs on the two networks start from
 * comparable states. Requires uniform geometry and limits, since new
 * channels have nothing to inherit from, and no fault windows.
 */
inline std::pair<Scenario, Vec> embed_into_complete(const Scenario& sc, const Vec& x0) {
    if (!sc.uniform_geometry || !sc.uniform_limits)
        throw std::invalid_argument("embedding needs uniform geometry and limits");
    if (sc.has_faults) throw std::invalid_argument("embedding does not carry fault windows");
    if (x0.size() != sc.channel_count()) throw std::invalid_argument("state size mismatch");

    Scenario out = sc;
    out.name = sc.name + "+complete";
    out.network = JunctionNetwork::complete(sc.network.junction_count);
    const std::size_t m = out.network.channels.size();
    out.shapes.assign(m, sc.shapes.front());
    out.set_points.assign(m, sc.set_points.front());
    out.nominal.down.assign(m, sc.nominal.down.front());
    out.nominal.up.assign(m, sc.nominal.up.front());
    out.active = out.nominal;
    out.embed_requested = false;

    Vec mapped(m, 0.0);
    for (std::size_t c = 0; c < sc.channel_count(); ++c) {
        const auto [u, v] = sc.network.channels[c];
        const int idx = out.network.channel_index(u, v);
        mapped[static_cast<std::size_t>(idx)] = x0[c];
    }
    out.init.kind = InitSpec::Kind::Explicit;
    out.init.offsets = mapped;
    out.init.max_abs_offset = 0.0;
    return {out, mapped};
}

/**
 * @brief Scenario plus everything derived from its network.
 */
struct Workspace {
    ChannelGraph graph;
    AveragingWeights weights;
    SpectralSummary spectrum;
    double blend_floor = 0.0;
    PlannerSettings settings;

    explicit Workspace(const Scenario& sc)
        : graph(ChannelGraph::from_network(sc.network)), weights(graph),
          spectrum(spectral_summary(weights)),
          blend_floor(blend_floor_from_spectrum(spectrum, sc.blend_fallback)) {
        settings.gamma = sc.gamma;
        settings.k_max = sc.k_max;
        settings.blend_floor = blend_floor;
        settings.gain_bound = weights.shift_gain_bound();
        settings.validate();
    }
};

}  // namespace ocnreg
