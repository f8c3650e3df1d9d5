// Command-line front end over the C interface.
#include <billiard/billiard_c.h>

#include <CLI11.hpp>
#include <boost/crc.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr const char* version = "1.0.0";

struct Failure {
    bl_status status;
    std::string message;
};

void check(bl_status s)
{
    if (s != BL_OK) throw Failure{s, bl_last_error()};
}

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{BL_INVALID_ARGUMENT, msg}; }

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using PolygonPtr = std::unique_ptr<bl_polygon, Deleter<bl_polygon, bl_polygon_destroy>>;
using ChannelPtr = std::unique_ptr<bl_channel, Deleter<bl_channel, bl_channel_destroy>>;
using FieldPtr = std::unique_ptr<bl_field, Deleter<bl_field, bl_field_destroy>>;
using ModesPtr = std::unique_ptr<bl_modes, Deleter<bl_modes, bl_modes_destroy>>;

std::string shortest(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string g12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Accepts decimals and fractions such as 1/150.
double parse_number(const std::string& s)
{
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return std::stod(s);
        return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    } catch (const std::exception&) {
        usage_error("not a number: " + s);
    }
}

struct Options {
    std::vector<std::string> preset;
    std::string out = "billiard_out";
    std::string kind;
    std::optional<int> m, n, p, q;
    int mmax = 0, nmax = 0;
    std::optional<std::string> gamma;
    std::string variant = "sin";
    int nx = 128, ny = 128;
    std::string h = "0.01";
    int k = 10;
    bool superscar = false;
    bool delta = false;
    std::uint64_t seed = 20240531;
};

struct Loaded {
    std::string name;
    std::vector<double> params;
    PolygonPtr poly;
    bl_preset_info info{};
};

Loaded load(const Options& o)
{
    if (o.preset.empty()) usage_error("--preset is required");
    Loaded l;
    l.name = o.preset[0];
    for (std::size_t i = 1; i < o.preset.size(); ++i) l.params.push_back(parse_number(o.preset[i]));
    bl_polygon* raw = nullptr;
    check(bl_polygon_preset(l.name.c_str(), l.params.data(), l.params.size(), &raw));
    l.poly.reset(raw);
    check(bl_polygon_preset_info(l.poly.get(), &l.info));
    return l;
}

double direction_of(const Options& o, const Loaded& l)
{
    if (o.gamma) return parse_number(*o.gamma);
    if (l.info.has_direction) return l.info.direction;
    usage_error("this preset has no default direction, pass --gamma");
}

ChannelPtr channel_of(const Options& o, const Loaded& l)
{
    bl_channel* raw = nullptr;
    if (l.name == "rectangle" && o.p && o.q) {
        check(bl_channel_rect(l.params[0], l.params[1], *o.p, *o.q, &raw));
    } else {
        const double g = direction_of(o, l);
        const bool use_seed = l.info.has_seed && !o.gamma;
        check(bl_channel_trace(l.poly.get(), g, use_seed ? l.info.seed_side : -1, use_seed ? l.info.seed_offset : 0.0, &raw));
    }
    return ChannelPtr(raw);
}

std::vector<double> lshape_params(const Loaded& l)
{
    if (l.info.has_lshape) return {l.info.lshape, l.info.lshape + 4};
    if (l.name == "lshape") return l.params;
    usage_error("superscar needs an lshape or figure13A preset");
}

// Maps a CLI kind and preset onto a C API spectrum kind with parameters.
std::pair<std::string, std::vector<double>> api_kind(const std::string& kind, const Options& o, const Loaded& l)
{
    const auto need_rect = [&] {
        if (l.name != "rectangle") usage_error(kind + " needs a rectangle preset");
    };
    const auto need_pq = [&] {
        if (!o.p || !o.q) usage_error(kind + " needs --p and --q");
    };
    if (kind == "generic") return need_rect(), std::pair{std::string("rect_generic"), l.params};
    if (kind == "bouncing") return need_rect(), std::pair{std::string("rect_bouncing"), l.params};
    if (kind == "degenerate") {
        need_rect();
        need_pq();
        return {"degenerate", {l.params[0], l.params[1], double(*o.p), double(*o.q)}};
    }
    if (kind == "broken") {
        if (l.name != "lshape") usage_error("broken needs an lshape preset");
        return {"broken", l.params};
    }
    if (kind == "superscar") return {"superscar", lshape_params(l)};
    if (kind == "triangle-regular" || kind == "triangle-singular") {
        if (l.name != "triangle") usage_error(kind + " needs the triangle preset");
        return {kind == "triangle-regular" ? "triangle_regular" : "triangle_singular", {3.0}};
    }
    if (kind == "pentagon-gallery") return {"pentagon_gallery", {}};
    if (kind == "pentagon-star") return {"pentagon_star", {}};
    if (kind == "deformed-wide") return {"deformed_wide", {}};
    if (kind == "deformed-narrow") return {"deformed_narrow", {}};
    usage_error("unknown kind " + kind);
}

struct Output {
    fs::path dir;
    std::vector<std::pair<std::string, std::uint32_t>> files;
    nlohmann::json metrics = nlohmann::json::object();  // full precision, for bitwise regression

    void write(const std::string& name, const std::string& content)
    {
        fs::create_directories(dir);
        std::ofstream f(dir / name, std::ios::binary);
        f << content;
        if (!f) throw Failure{BL_INTERNAL, "cannot write " + (dir / name).string()};
        boost::crc_32_type crc;
        crc.process_bytes(content.data(), content.size());
        files.emplace_back(name, crc.checksum());
    }

    void manifest(const std::string& command, const std::vector<std::string>& args)
    {
        nlohmann::json j;
        j["command"] = command;
        j["arguments"] = args;
        j["version"] = version;
        if (!metrics.empty()) j["metrics"] = metrics;
        j["outputs"] = nlohmann::json::array();
        for (const auto& [name, crc] : files) {
            char hex[16];
            std::snprintf(hex, sizeof hex, "%08x", crc);
            j["outputs"].push_back({{"file", name}, {"crc32", hex}});
        }
        fs::create_directories(dir);
        std::ofstream(dir / "manifest.json") << j.dump(2) << '\n';
    }
};

std::vector<std::pair<int, int>> index_pairs(const Options& o)
{
    std::vector<std::pair<int, int>> out;
    if (o.m && o.n) return {{*o.m, *o.n}};
    if (o.mmax < 1 || o.nmax < 1) usage_error("pass --m and --n, or --mmax and --nmax");
    for (int m = 1; m <= o.mmax; ++m)
        for (int n = 1; n <= o.nmax; ++n) out.emplace_back(m, n);
    return out;
}

int cmd_spectrum(const Options& o, Output& out)
{
    const Loaded l = load(o);
    const auto pairs = index_pairs(o);
    const bool single = pairs.size() == 1;
    std::vector<bl_level> levels;
    ChannelPtr ch;
    std::pair<std::string, std::vector<double>> api;
    if (o.kind == "channel") ch = channel_of(o, l);
    else api = api_kind(o.kind, o, l);
    for (const auto& [m, n] : pairs) {
        bl_level lv{};
        const bl_status s = ch ? bl_channel_level(ch.get(), m, n, &lv)
                               : bl_spectrum(api.first.c_str(), api.second.data(), api.second.size(), m, n, &lv);
        // in range mode, index pairs excluded by a parity rule are simply not levels
        if (s == BL_PARITY_VIOLATION && !single) continue;
        check(s);
        levels.push_back(lv);
    }
    std::stable_sort(levels.begin(), levels.end(), [](const bl_level& a, const bl_level& b) { return a.E < b.E; });
    std::ostringstream csv;
    csv << "kind,m,n,E,degeneracy\n";
    for (const bl_level& lv : levels) csv << lv.kind << ',' << lv.m << ',' << lv.n << ',' << g12(lv.E) << ',' << lv.degeneracy << '\n';
    std::cout << csv.str();
    out.write("spectrum.csv", csv.str());
    return 0;
}

bl_variant variant_of(const std::string& v)
{
    if (v == "sin" || v == "1") return BL_PLUS;
    if (v == "cos" || v == "2") return BL_MINUS;
    if (v == "running") return BL_RUNNING;
    usage_error("variant is sin, cos, running, 1 or 2");
}

FieldPtr field_of(const Options& o, const Loaded& l, int m, int n)
{
    bl_field* raw = nullptr;
    if (o.kind == "channel") {
        const ChannelPtr ch = channel_of(o, l);
        check(bl_field_from_channel(l.poly.get(), ch.get(), m, n, variant_of(o.variant), &raw));
    } else {
        std::string kind = o.kind;
        if (kind == "rect-channel") {
            if (l.name != "rectangle" || !o.p || !o.q) usage_error("rect-channel needs a rectangle preset, --p and --q");
            const double params[] = {l.params[0], l.params[1], double(*o.p), double(*o.q)};
            check(bl_field_create("rect_channel", params, 4, m, n, variant_of(o.variant), &raw));
        } else {
            const auto api = api_kind(kind, o, l);
            check(bl_field_create(api.first.c_str(), api.second.data(), api.second.size(), m, n, variant_of(o.variant), &raw));
        }
    }
    return FieldPtr(raw);
}

int cmd_wavefield(const Options& o, Output& out)
{
    const Loaded l = load(o);
    if (!o.m || !o.n) usage_error("wavefield needs --m and --n");
    const FieldPtr f = field_of(o, l, *o.m, *o.n);
    double box[4];
    check(bl_polygon_bounds(l.poly.get(), box));
    const double h = std::max((box[2] - box[0]) / o.nx, (box[3] - box[1]) / o.ny);
    const auto cells = static_cast<std::size_t>(o.nx) * static_cast<std::size_t>(o.ny);
    std::vector<double> re(cells), im(cells);
    std::vector<unsigned char> mask(cells);
    int coarse = 0;
    check(bl_field_sample(f.get(), box[0], box[1], h, o.nx, o.ny, re.data(), im.data(), mask.data(), &coarse));
    if (coarse) std::cerr << "warning: fewer than 8 cells per wavelength\n";
    std::ostringstream csv;
    csv << "x,y,re,im\n";
    double peak = 0.0;
    for (int iy = 0; iy < o.ny; ++iy)
        for (int ix = 0; ix < o.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * o.nx + ix;
            csv << shortest(box[0] + (ix + 0.5) * h) << ',' << shortest(box[1] + (iy + 0.5) * h) << ',' << shortest(re[i]) << ','
                << shortest(im[i]) << '\n';
            peak = std::max(peak, re[i] * re[i] + im[i] * im[i]);
        }
    std::string pgm = "P5\n" + std::to_string(o.nx) + " " + std::to_string(o.ny) + "\n255\n";
    for (int iy = o.ny - 1; iy >= 0; --iy)
        for (int ix = 0; ix < o.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * o.nx + ix;
            const double v = peak > 0 ? (re[i] * re[i] + im[i] * im[i]) / peak : 0.0;
            pgm.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
        }
    out.write("wavefield.csv", csv.str());
    out.write("wavefield.pgm", pgm);
    double E = 0.0;
    check(bl_field_energy(f.get(), &E));
    std::cout << "E " << g12(E) << "\npeak |psi|^2 " << g12(peak) << '\n';
    return 0;
}

int cmd_skeleton(const Options& o, Output& out)
{
    const Loaded l = load(o);
    const double g = direction_of(o, l);
    size_t len = 0;
    check(bl_skeleton_report(l.poly.get(), g, nullptr, 0, &len));
    std::string text(len + 1, '\0');
    check(bl_skeleton_report(l.poly.get(), g, text.data(), text.size(), &len));
    text.resize(len);
    text += '\n';
    std::cout << text;
    out.write("skeleton.json", text);
    return 0;
}

struct Report {
    std::ostringstream text, csv;
    std::vector<std::pair<std::string, double>> values;
    Report() { csv << "metric,value\n"; }
    void add(const std::string& key, double v)
    {
        values.emplace_back(key, v);
        text << key << ' ' << g12(v) << '\n';
        csv << key << ',' << g12(v) << '\n';
    }
    void note(const std::string& line) { text << line << '\n'; }
};

ModesPtr solve(const Options& o, const Loaded& l, Output& out)
{
    bl_modes* raw = nullptr;
    check(bl_modes_solve(l.poly.get(), parse_number(o.h), o.k, o.seed, &raw));
    ModesPtr modes(raw);
    int count = 0;
    check(bl_modes_count(modes.get(), &count));
    std::ostringstream csv;
    csv << "index,E,residual\n";
    for (int i = 0; i < count; ++i) {
        double E = 0, r = 0;
        check(bl_modes_value(modes.get(), i, &E, &r));
        csv << i << ',' << shortest(E) << ',' << shortest(r) << '\n';
    }
    out.write("eigen.csv", csv.str());
    return modes;
}

// Semiclassical energies to compare with the numerical modes of a preset.
double largest_value(const std::string& kind, const std::vector<double>& params, int m, int n, bl_variant v)
{
    bl_field* raw = nullptr;
    check(bl_field_create(kind.c_str(), params.data(), params.size(), m, n, v, &raw));
    const FieldPtr f(raw);
    constexpr int cells = 64;
    const double h = params[0] / cells;
    std::vector<double> re(cells * cells), im(cells * cells);
    std::vector<unsigned char> mask(cells * cells);
    int coarse = 0;
    check(bl_field_sample(f.get(), 0.0, 0.0, h, cells, cells, re.data(), im.data(), mask.data(), &coarse));
    double top = 0.0;
    for (int i = 0; i < cells * cells; ++i)
        if (mask[i]) top = std::max(top, std::hypot(re[i], im[i]));
    return top;
}

std::vector<bl_level> reference_levels(const Loaded& l, double e_max)
{
    std::string kind;
    std::vector<double> params;
    if (l.name == "rectangle") kind = "rect_generic", params = l.params;
    else if (l.name == "triangle") kind = "triangle_regular", params = {3.0};
    else return {};
    std::vector<bl_level> out;
    for (int m = 1; m <= 60; ++m)
        for (int n = 1; n <= 60; ++n) {
            bl_level lv{};
            if (bl_spectrum(kind.c_str(), params.data(), params.size(), m, n, &lv) != BL_OK || lv.E > e_max) continue;
            if (kind != "triangle_regular") {
                out.push_back(lv);
                continue;
            }
            // one entry per solution that does not vanish identically
            for (const bl_variant v : {BL_PLUS, BL_MINUS})
                if (largest_value(kind, params, m, n, v) > 1e-8) out.push_back(lv);
        }
    std::stable_sort(out.begin(), out.end(), [](const bl_level& a, const bl_level& b) { return a.E < b.E; });
    return out;
}

int cmd_validate(const Options& o, Output& out)
{
    const Loaded l = load(o);
    Report rep;
    if (o.delta) {
        double dev = 0.0;
        int checked = 0;
        const double g = o.gamma ? parse_number(*o.gamma) : (l.info.has_direction ? l.info.direction : 0.3);
        check(bl_delta_check(l.poly.get(), g, 20, o.seed, &dev, &checked));
        rep.add("delta_bundles", checked);
        rep.add("delta_max_deviation", dev);
        rep.note(dev < 1e-10 ? "delta constancy: pass" : "delta constancy: FAIL");
    } else if (o.superscar) {
        const ModesPtr modes = solve(o, l, out);
        const int m = o.m.value_or(1), n = o.n.value_or(2);
        const auto params = lshape_params(l);
        bl_field* raw = nullptr;
        check(bl_field_create("superscar", params.data(), params.size(), m, n, variant_of(o.variant), &raw));
        const FieldPtr f(raw);
        int count = 0;
        check(bl_modes_count(modes.get(), &count));
        std::vector<double> ov(static_cast<std::size_t>(count));
        int part = 0, dom = 0;
        double total = 0.0, E = 0.0, Edom = 0.0;
        check(bl_modes_overlap(modes.get(), f.get(), ov.data(), &part, &dom, &total));
        check(bl_field_energy(f.get(), &E));
        check(bl_modes_value(modes.get(), dom, &Edom, nullptr));
        rep.add("superscar_energy", E);
        rep.add("participation", part);
        rep.add("captured_weight", total);
        rep.add("dominant_mode", dom);
        rep.add("dominant_mode_energy", Edom);
        rep.add("dominant_overlap", ov[static_cast<std::size_t>(dom)]);
        double b = 0, hres = 0;
        check(bl_field_residuals(f.get(), 200, 1000, o.seed, &b, &hres));
        rep.add("boundary_residual", b);
        rep.add("helmholtz_residual", hres);
    } else {
        const ModesPtr modes = solve(o, l, out);
        int count = 0;
        check(bl_modes_count(modes.get(), &count));
        double emax = 0.0;
        check(bl_modes_value(modes.get(), count - 1, &emax, nullptr));
        const auto levels = reference_levels(l, emax * 1.01);
        std::vector<double> energies;
        for (const auto& lv : levels) energies.push_back(lv.E);
        std::vector<int> idx(energies.size());
        std::vector<double> err(energies.size());
        check(bl_modes_match(modes.get(), energies.data(), energies.size(), 0.01, idx.data(), err.data()));
        int matched = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            rep.note(std::string(levels[i].kind) + " m=" + std::to_string(levels[i].m) + " n=" + std::to_string(levels[i].n) +
                     " E=" + g12(levels[i].E) + (idx[i] >= 0 ? " mode=" + std::to_string(idx[i]) + " rel=" + g12(err[i]) : " unmatched"));
            if (idx[i] >= 0) ++matched, worst = std::max(worst, err[i]);
        }
        rep.add("modes", count);
        rep.add("levels", static_cast<double>(levels.size()));
        rep.add("matched", matched);
        rep.add("worst_rel_error", worst);
    }
    std::cout << rep.text.str();
    for (const auto& [key, v] : rep.values) out.metrics[key] = v;
    out.write("validate.txt", rep.text.str());
    out.write("validate.csv", rep.csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    if (const char* t = std::getenv("BILLIARD_THREADS")) bl_set_threads(static_cast<unsigned>(std::strtoul(t, nullptr, 10)));

    CLI::App app{"Semiclassical polygon billiards"};
    // -h is taken by the grid spacing of validate
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    Options o;
    const auto common = [&](CLI::App* c) {
        c->add_option("--preset", o.preset, "preset name followed by its parameters")->expected(1, 5)->required();
        c->add_option("--out", o.out, "output directory");
        c->add_option("--gamma", o.gamma, "ray direction in radians");
        c->add_option("--p", o.p);
        c->add_option("--q", o.q);
        c->add_option("--m", o.m);
        c->add_option("--n", o.n);
        c->add_option("--seed", o.seed);
    };
    auto* spectrum = app.add_subcommand("spectrum", "closed-form levels as CSV");
    common(spectrum);
    spectrum->add_option("--kind", o.kind)->required();
    spectrum->add_option("--mmax", o.mmax);
    spectrum->add_option("--nmax", o.nmax);
    auto* wavefield = app.add_subcommand("wavefield", "sample a wave function to CSV and PGM");
    common(wavefield);
    wavefield->add_option("--field", o.kind)->required();
    wavefield->add_option("--variant", o.variant);
    wavefield->add_option("--nx", o.nx);
    wavefield->add_option("--ny", o.ny);
    auto* skeleton = app.add_subcommand("skeleton", "skeleton report as JSON");
    common(skeleton);
    auto* validate = app.add_subcommand("validate", "compare against the finite-difference solver");
    common(validate);
    validate->add_option("--h", o.h, "grid spacing, fractions allowed");
    validate->add_option("--k", o.k, "number of modes");
    validate->add_flag("--superscar", o.superscar);
    validate->add_flag("--delta", o.delta);
    validate->add_option("--variant", o.variant);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    Output out{o.out, {}};
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        int rc = 0;
        std::string name;
        if (spectrum->parsed()) name = "spectrum", rc = cmd_spectrum(o, out);
        else if (wavefield->parsed()) name = "wavefield", rc = cmd_wavefield(o, out);
        else if (skeleton->parsed()) name = "skeleton", rc = cmd_skeleton(o, out);
        else name = "validate", rc = cmd_validate(o, out);
        out.manifest(name, args);
        return rc;
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        if (f.status == BL_NO_CONVERGENCE) return 3;
        return f.status == BL_INTERNAL ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
