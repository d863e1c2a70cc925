#include "resilsim/testbed.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <queue>
#include <random>
#include <sstream>
#include <vector>

namespace resilsim {

namespace {

std::string num(double v) {
    v = std::round(v * 100.0) / 100.0;
    if (v == 0.0) v = 0.0;  // drop negative zero
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Grid {
    int n;
    double spacing;
    int margin;

    int id(int r, int c) const { return r * n + c; }
    int row(int v) const { return v / n; }
    int col(int v) const { return v % n; }
    double x(int v) const { return col(v) * spacing; }
    double y(int v) const { return row(v) * spacing; }
    bool in_block(int v) const {
        const int r = row(v), c = col(v);
        return r >= margin && r < n - margin && c >= margin && c < n - margin;
    }
    static bool arterial(int line) { return line % 4 == 2; }
    std::string node_name(int v) const { return "N" + std::to_string(row(v)) + "_" + std::to_string(col(v)); }
};

void validate(const TestbedParams& p) {
    if (p.grid_size < 2) throw InfeasibleParams("grid size must be at least 2");
    if (p.households < 1) throw InfeasibleParams("need at least one household");
    if (p.substations < 1) throw InfeasibleParams("need at least one substation");
    if (!(p.lights_fraction >= 0.0 && p.lights_fraction <= 1.0))
        throw InfeasibleParams("lights fraction must be in [0, 1]");
    if (!(p.spacing_m > 0.0)) throw InfeasibleParams("grid spacing must be positive");
    if (p.teams < 1) throw InfeasibleParams("teams must be positive");
    if (!(p.runoff_min_in >= 0.0 && p.runoff_max_in >= p.runoff_min_in))
        throw InfeasibleParams("runoff range must satisfy 0 <= min <= max");
}

}  // namespace

Testbed generate_testbed(const TestbedParams& p) {
    validate(p);
    const Grid g{p.grid_size, p.spacing_m, p.grid_size / 15};
    const int block_lo = g.margin;
    const int block_side = g.n - 2 * g.margin;
    if (p.substations > block_side * block_side)
        throw InfeasibleParams("more substations (" + std::to_string(p.substations) +
                               ") than distribution grid nodes (" + std::to_string(block_side * block_side) + ")");

    std::mt19937_64 rng(p.seed);

    // Roads.
    std::ostringstream roads;
    roads << "# node,id,x_m,y_m\n# link,id,from,to,length_m\n";
    for (int v = 0; v < g.n * g.n; ++v) roads << "node," << g.node_name(v) << ',' << num(g.x(v)) << ',' << num(g.y(v)) << '\n';
    struct LinkRec {
        int a, b;
    };
    std::vector<LinkRec> links;
    for (int r = 0; r < g.n; ++r) {
        for (int c = 0; c < g.n; ++c) {
            if (c + 1 < g.n) links.push_back({g.id(r, c), g.id(r, c + 1)});
            if (r + 1 < g.n) links.push_back({g.id(r, c), g.id(r + 1, c)});
        }
    }
    for (std::size_t k = 0; k < links.size(); ++k) {
        roads << "link,L" << k << ',' << g.node_name(links[k].a) << ',' << g.node_name(links[k].b) << ','
              << num(g.spacing) << '\n';
    }

    // Substation sites: centers of a kx-by-ky partition of the block.
    const int kx = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p.substations))));
    const int ky = (p.substations + kx - 1) / kx;
    std::vector<int> sub_nodes;
    for (int i = 0; i < p.substations; ++i) {
        const int cx = i % kx, cy = i / kx;
        const int c = block_lo + static_cast<int>(std::floor(block_side * (cx + 0.5) / kx));
        const int r = block_lo + static_cast<int>(std::floor(block_side * (cy + 0.5) / ky));
        int v = g.id(std::min(r, g.n - 1 - g.margin), std::min(c, g.n - 1 - g.margin));
        // Resolve collisions on tiny grids by scanning forward through the block.
        while (std::find(sub_nodes.begin(), sub_nodes.end(), v) != sub_nodes.end() || !g.in_block(v))
            v = (v + 1) % (g.n * g.n);
        sub_nodes.push_back(v);
    }

    std::ostringstream power;
    std::ostringstream edges;
    power << "# component,id,kind,x_m,y_m\n";
    auto component = [&](const std::string& id, const char* kind, double x, double y) {
        power << "component," << id << ',' << kind << ',' << num(x) << ',' << num(y) << '\n';
        return id;
    };
    auto edge = [&](const std::string& a, const std::string& b) { edges << "edge," << a << ',' << b << '\n'; };

    const int root = g.id(0, 0);
    const std::string plant = component("PLANT", "plant", -0.3 * g.spacing, -0.3 * g.spacing);

    // Transmission: union of row-0-then-column paths from the corner to each
    // substation, contracted to towers every few spans and at junctions.
    std::vector<int> parent(static_cast<std::size_t>(g.n * g.n), -1);
    std::vector<int> depth(parent.size(), -1);
    std::vector<int> children(parent.size(), 0);
    std::vector<char> on_tree(parent.size(), 0);
    on_tree[root] = 1;
    depth[root] = 0;
    for (int s : sub_nodes) {
        std::vector<int> path{root};
        for (int c = 1; c <= g.col(s); ++c) path.push_back(g.id(0, c));
        for (int r = 1; r <= g.row(s); ++r) path.push_back(g.id(r, g.col(s)));
        for (std::size_t i = 1; i < path.size(); ++i) {
            const int v = path[i];
            if (on_tree[v]) continue;
            on_tree[v] = 1;
            parent[v] = path[i - 1];
            depth[v] = static_cast<int>(i);
            ++children[path[i - 1]];
        }
    }
    std::vector<char> is_sub(parent.size(), 0);
    for (int s : sub_nodes) is_sub[s] = 1;
    std::vector<std::string> key_name(parent.size());
    key_name[root] = plant;
    int tower_count = 0, line_count = 0;
    for (int v = 0; v < g.n * g.n; ++v) {
        if (!on_tree[v] || v == root) continue;
        const bool key = is_sub[v] || children[v] != 1 || depth[v] % 6 == 0;
        if (!key) continue;
        if (is_sub[v] && children[v] == 0) continue;  // the substation itself terminates the path
        key_name[v] = component("T" + std::to_string(tower_count++), "tower", g.x(v), g.y(v));
    }
    std::vector<std::string> sub_names;
    for (std::size_t i = 0; i < sub_nodes.size(); ++i) {
        const int s = sub_nodes[i];
        sub_names.push_back(component("SUB" + std::to_string(i), "substation", g.x(s) + 0.2 * g.spacing,
                                      g.y(s) + 0.2 * g.spacing));
    }
    auto add_line = [&](const std::string& a, double ax, double ay, const std::string& b, double bx, double by) {
        const std::string id = component("TL" + std::to_string(line_count++), "line", (ax + bx) / 2, (ay + by) / 2);
        edge(a, id);
        edge(id, b);
    };
    for (int v = 0; v < g.n * g.n; ++v) {
        if (!on_tree[v] || v == root || key_name[v].empty()) continue;
        int u = parent[v];
        while (key_name[u].empty()) u = parent[u];
        add_line(key_name[u], g.x(u), g.y(u), key_name[v], g.x(v), g.y(v));
    }
    for (std::size_t i = 0; i < sub_nodes.size(); ++i) {
        const int s = sub_nodes[i];
        if (s == root) {
            add_line(plant, 0, 0, sub_names[i], g.x(s), g.y(s));
        } else if (children[s] == 0) {
            int u = parent[s];
            while (key_name[u].empty()) u = parent[u];
            add_line(key_name[u], g.x(u), g.y(u), sub_names[i], g.x(s), g.y(s));
        } else {
            add_line(key_name[s], g.x(s), g.y(s), sub_names[i], g.x(s), g.y(s));
        }
    }

    // Distribution: feeder trees grown from the substations over the block,
    // preferring arterial streets.
    std::vector<double> dist(parent.size(), std::numeric_limits<double>::infinity());
    std::vector<int> feeder_parent(parent.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (int s : sub_nodes) {
        dist[s] = 0.0;
        queue.emplace(0.0, s);
    }
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        const int r = g.row(v), c = g.col(v);
        const int nbrs[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
        for (const auto& nb : nbrs) {
            if (nb[0] < 0 || nb[0] >= g.n || nb[1] < 0 || nb[1] >= g.n) continue;
            const int w = g.id(nb[0], nb[1]);
            if (!g.in_block(w)) continue;
            const bool arterial = nb[0] == r ? Grid::arterial(r) : Grid::arterial(c);
            const double nd = d + (arterial ? 1.0 : 1.3);
            if (nd < dist[w] - 1e-12) {
                dist[w] = nd;
                feeder_parent[w] = v;
                queue.emplace(nd, w);
            }
        }
    }

    std::vector<std::string> node_pole(parent.size());
    struct Pole {
        std::string id;
        double x, y;
    };
    std::vector<Pole> poles;
    for (int v = 0; v < g.n * g.n; ++v) {
        if (!g.in_block(v)) continue;
        node_pole[v] = component("P" + std::to_string(poles.size()), "pole", g.x(v), g.y(v));
        poles.push_back({node_pole[v], g.x(v), g.y(v)});
    }
    for (std::size_t i = 0; i < sub_nodes.size(); ++i) edge(sub_names[i], node_pole[sub_nodes[i]]);
    int conductor_count = 0;
    for (int v = 0; v < g.n * g.n; ++v) {
        if (!g.in_block(v) || feeder_parent[v] < 0) continue;
        const int u = feeder_parent[v];
        const double mx = (g.x(u) + g.x(v)) / 2, my = (g.y(u) + g.y(v)) / 2;
        const std::string mid = component("P" + std::to_string(poles.size()), "pole", mx, my);
        poles.push_back({mid, mx, my});
        const std::string c1 = component("C" + std::to_string(conductor_count++), "conductor",
                                         (g.x(u) + mx) / 2, (g.y(u) + my) / 2);
        const std::string c2 = component("C" + std::to_string(conductor_count++), "conductor",
                                         (mx + g.x(v)) / 2, (my + g.y(v)) / 2);
        edge(node_pole[u], c1);
        edge(c1, mid);
        edge(mid, c2);
        edge(c2, node_pole[v]);
    }
    power << "# edge,a,b\n" << edges.str();

    // Couplings.
    std::ostringstream couplings;
    couplings << "# household,id,x_m,y_m,component\n";
    std::uniform_int_distribution<std::size_t> pick_pole(0, poles.size() - 1);
    std::uniform_real_distribution<double> jitter(-0.25 * g.spacing, 0.25 * g.spacing);
    for (int h = 0; h < p.households; ++h) {
        const Pole& pole = poles[pick_pole(rng)];
        const double x = pole.x + jitter(rng);
        const double y = pole.y + jitter(rng);
        couplings << "household,H" << h << ',' << num(x) << ',' << num(y) << ',' << pole.id << '\n';
    }

    std::vector<int> preferred, others;
    for (int v = 0; v < g.n * g.n; ++v) {
        if (!g.in_block(v)) continue;
        (Grid::arterial(g.row(v)) && Grid::arterial(g.col(v)) ? preferred : others).push_back(v);
    }
    std::shuffle(preferred.begin(), preferred.end(), rng);
    std::shuffle(others.begin(), others.end(), rng);
    preferred.insert(preferred.end(), others.begin(), others.end());
    const auto n_lights = std::min<std::size_t>(
        preferred.size(), static_cast<std::size_t>(std::llround(p.lights_fraction * g.n * g.n)));
    std::vector<int> light_nodes(preferred.begin(), preferred.begin() + static_cast<std::ptrdiff_t>(n_lights));
    std::sort(light_nodes.begin(), light_nodes.end());
    couplings << "# light,id,intersection,component\n";
    for (std::size_t i = 0; i < light_nodes.size(); ++i) {
        const int v = light_nodes[i];
        couplings << "light,TS" << i << ',' << g.node_name(v) << ',' << node_pole[v] << '\n';
    }

    // Scenario: runoff from a few smooth bumps rescaled into [min, max].
    const double extent = (g.n - 1) * g.spacing;
    struct Bump {
        double x, y, sigma, weight;
    };
    std::uniform_real_distribution<double> coord(0.0, extent);
    std::uniform_real_distribution<double> unit(0.5, 1.0);
    std::vector<Bump> bumps;
    for (int i = 0; i < 5; ++i) {
        const double bx = coord(rng), by = coord(rng);
        bumps.push_back({bx, by, (0.15 + 0.15 * unit(rng)) * std::max(extent, g.spacing), unit(rng)});
    }
    std::vector<double> field(links.size());
    for (std::size_t k = 0; k < links.size(); ++k) {
        const double x = (g.x(links[k].a) + g.x(links[k].b)) / 2, y = (g.y(links[k].a) + g.y(links[k].b)) / 2;
        double f = 0.0;
        for (const auto& b : bumps) {
            const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
            f += b.weight * std::exp(-d2 / (2 * b.sigma * b.sigma));
        }
        field[k] = f;
    }
    const auto [lo_it, hi_it] = std::minmax_element(field.begin(), field.end());
    const double lo = *lo_it, span = *hi_it - *lo_it;
    nlohmann::ordered_json runoff_links = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < links.size(); ++k) {
        const double t = span > 0 ? (field[k] - lo) / span : 0.0;
        const double depth = p.runoff_min_in + t * (p.runoff_max_in - p.runoff_min_in);
        runoff_links["L" + std::to_string(k)] = std::round(depth * 100.0) / 100.0;
    }

    nlohmann::ordered_json scenario;
    scenario["description"] = "generated testbed, seed " + std::to_string(p.seed);
    scenario["wind_mph"] = p.wind_mph;
    scenario["teams"] = p.teams;
    scenario["drainage_in_per_hr"] = 0.65;
    scenario["passability_threshold_in"] = 2.0;
    scenario["fuel_dependence"] = true;
    scenario["crew_access_dependence"] = true;
    const int far = g.id(g.n - 1, g.n - 1);
    scenario["fuel_source_m"] = {{"x", g.x(far)}, {"y", g.y(far)}};
    scenario["runoff_in"] = {{"default", p.runoff_min_in}, {"links", std::move(runoff_links)}};

    return {power.str(), roads.str(), couplings.str(), scenario.dump(2) + "\n"};
}

void write_testbed(const Testbed& bed, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto put = [&](const char* name, const std::string& text) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    };
    put("power.csv", bed.power);
    put("roads.csv", bed.roads);
    put("couplings.csv", bed.couplings);
    put("scenario.json", bed.scenario);
}

}  // namespace resilsim
