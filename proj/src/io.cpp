#include "nmgab/io.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace nmgab {

using nlohmann::json;

namespace {

std::string where(const std::string& source, std::optional<std::size_t> line) {
    return line ? source + ":" + std::to_string(*line) : source;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool skippable(const std::string& line) { return line.empty() || line.front() == '#'; }

json coord_json(Coord c) { return json::array({c.x, c.y}); }
Coord coord_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json axon_ref_json(const AxonRef& r) { return json::array({r.core.x, r.core.y, r.axon}); }
AxonRef axon_ref_from(const json& j) { return {{j.at(0).get<int>(), j.at(1).get<int>()}, j.at(2).get<int>()}; }
json neuron_ref_json(const NeuronRef& r) { return json::array({r.core.x, r.core.y, r.neuron}); }
NeuronRef neuron_ref_from(const json& j) { return {{j.at(0).get<int>(), j.at(1).get<int>()}, j.at(2).get<int>()}; }

json neuron_json(const NeuronConfig& n) {
    json d = nullptr;
    if (n.destination) {
        const auto& t = *n.destination;
        d = t.host ? json{{"kind", "host"}, {"delay", t.delay}}
                   : json{{"kind", "axon"}, {"x", t.core.x}, {"y", t.core.y}, {"axon", t.axon}, {"delay", t.delay}};
    }
    return {{"label", n.label},
            {"mode", n.mode == NeuronMode::lif ? "lif" : "xor"},
            {"weights", n.weights},
            {"threshold", n.threshold},
            {"leak", n.leak},
            {"reset", n.reset_potential},
            {"destination", d}};
}

NeuronConfig neuron_from(const json& j) {
    NeuronConfig n;
    n.label = j.at("label").get<std::string>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "lif" && mode != "xor") throw std::invalid_argument("unknown neuron mode '" + mode + "'");
    n.mode = mode == "lif" ? NeuronMode::lif : NeuronMode::xor_parity;
    n.weights = j.at("weights").get<std::vector<int>>();
    n.threshold = j.at("threshold").get<int>();
    n.leak = j.at("leak").get<int>();
    n.reset_potential = j.at("reset").get<int>();
    const auto& d = j.at("destination");
    if (!d.is_null()) {
        const auto kind = d.at("kind").get<std::string>();
        if (kind == "host") n.destination = Destination::to_host(d.at("delay").get<int>());
        else if (kind == "axon")
            n.destination = Destination::to_axon({d.at("x").get<int>(), d.at("y").get<int>()}, d.at("axon").get<int>(),
                                                 d.at("delay").get<int>());
        else throw std::invalid_argument("unknown destination kind '" + kind + "'");
    }
    return n;
}

json core_json(Coord at, const CoreConfig& c) {
    json axons = json::array();
    for (const auto& a : c.axons) axons.push_back({{"type", a.type_index}, {"label", a.label}});
    json neurons = json::array();
    for (const auto& n : c.neurons) neurons.push_back(neuron_json(n));
    json rows = json::array();
    for (std::size_t a = 0; a < c.crossbar.rows(); ++a) {
        std::string row(c.crossbar.cols(), '0');
        for (std::size_t n = 0; n < c.crossbar.cols(); ++n)
            if (c.crossbar.get(a, n)) row[n] = '1';
        rows.push_back(row);
    }
    return {{"x", at.x},
            {"y", at.y},
            {"name", c.name},
            {"max_axons", c.max_axons},
            {"max_neurons", c.max_neurons},
            {"axons", axons},
            {"neurons", neurons},
            {"crossbar", rows}};
}

std::pair<Coord, CoreConfig> core_from(const json& j) {
    CoreConfig c;
    c.name = j.at("name").get<std::string>();
    c.max_axons = j.at("max_axons").get<std::size_t>();
    c.max_neurons = j.at("max_neurons").get<std::size_t>();
    for (const auto& a : j.at("axons")) c.axons.push_back({a.at("type").get<int>(), a.at("label").get<std::string>()});
    for (const auto& n : j.at("neurons")) c.neurons.push_back(neuron_from(n));
    const auto& rows = j.at("crossbar");
    c.crossbar = Crossbar(rows.size(), c.neurons.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
        const auto row = rows[a].get<std::string>();
        if (row.size() != c.neurons.size())
            throw std::invalid_argument("crossbar row " + std::to_string(a) + " of core '" + c.name + "' has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(c.neurons.size()));
        for (std::size_t n = 0; n < row.size(); ++n) {
            if (row[n] != '0' && row[n] != '1') throw std::invalid_argument("crossbar entries must be 0 or 1");
            c.crossbar.set(a, n, row[n] == '1');
        }
    }
    return {{j.at("x").get<int>(), j.at("y").get<int>()}, std::move(c)};
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string(), std::nullopt, "cannot open file");
    return in;
}

}  // namespace

InputError::InputError(const std::string& source, std::optional<std::size_t> line, const std::string& message)
    : std::runtime_error(where(source, line) + ": " + message), line_(line) {}

HMatrix parse_h_matrix(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::array<int, 4>> header;
    std::size_t header_line = 0;
    std::vector<BitVector> rows;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (skippable(line)) continue;
        if (!header) {
            std::istringstream ss(line);
            std::array<int, 4> h{};
            std::string extra;
            if (!(ss >> h[0] >> h[1] >> h[2] >> h[3]) || (ss >> extra))
                throw InputError(source, line_no, "expected header \"M N d_v d_c\"");
            for (int v : h)
                if (v <= 0) throw InputError(source, line_no, "header values must be positive");
            header = h;
            header_line = line_no;
            continue;
        }
        const auto M = static_cast<std::size_t>((*header)[0]);
        const auto N = static_cast<std::size_t>((*header)[1]);
        if (rows.size() == M) throw InputError(source, line_no, "more than M = " + std::to_string(M) + " rows");
        if (line.size() != N)
            throw InputError(source, line_no,
                             "row has " + std::to_string(line.size()) + " entries, expected N = " + std::to_string(N));
        try {
            rows.push_back(parse_bits(line));
        } catch (const std::invalid_argument& e) {
            throw InputError(source, line_no, e.what());
        }
    }
    if (!header) throw InputError(source, line_no, "missing header \"M N d_v d_c\"");
    if (rows.size() != static_cast<std::size_t>((*header)[0]))
        throw InputError(source, line_no,
                         "expected " + std::to_string((*header)[0]) + " rows, found " + std::to_string(rows.size()));
    try {
        return HMatrix(std::move(rows), (*header)[2], (*header)[3]);
    } catch (const std::invalid_argument& e) {
        throw InputError(source, header_line, e.what());
    }
}

HMatrix read_h_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_h_matrix(in, path.string());
}

void write_h_matrix(std::ostream& out, const HMatrix& H) {
    out << H.M() << ' ' << H.N() << ' ' << H.d_v() << ' ' << H.d_c() << '\n';
    for (const auto& row : H.rows()) out << to_string(row) << '\n';
}

std::vector<BitVector> parse_words(std::istream& in, std::optional<int> expected_bits, const std::string& source) {
    std::vector<BitVector> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (skippable(line)) continue;
        try {
            words.push_back(parse_bits(line));
        } catch (const std::invalid_argument& e) {
            throw InputError(source, line_no, e.what());
        }
        if (expected_bits && static_cast<int>(words.back().size()) != *expected_bits)
            throw InputError(source, line_no,
                             "word has " + std::to_string(words.back().size()) + " bits, expected " +
                                 std::to_string(*expected_bits));
    }
    return words;
}

std::vector<BitVector> read_words_file(const std::filesystem::path& path, std::optional<int> expected_bits) {
    auto in = open_input(path);
    return parse_words(in, expected_bits, path.string());
}

void write_words(std::ostream& out, const std::vector<BitVector>& words) {
    for (const auto& w : words) out << to_string(w) << '\n';
}

std::string layout_to_json(const DecoderLayout& layout) {
    json rows = json::array();
    for (const auto& row : layout.h.rows()) rows.push_back(to_string(row));
    json cores = json::array();
    for (const auto& [at, core] : layout.grid.cores) cores.push_back(core_json(at, core));
    json r = json::array();
    for (const auto& a : layout.ports.r) r.push_back(axon_ref_json(a));
    json x = json::array();
    for (const auto& n : layout.ports.x_out) x.push_back(neuron_ref_json(n));
    json roles = json::object();
    for (const auto& [role, at] : layout.roles) roles[std::string(role_name(role))] = coord_json(at);
    json xor_neurons = json::array();
    for (const auto& n : layout.xor_neurons) xor_neurons.push_back(neuron_ref_json(n));
    const auto& t = layout.timing;

    json doc = {
        {"format", "nmgab-layout"},
        {"version", 1},
        {"variant", std::string(variant_name(layout.variant))},
        {"max_iter", layout.params.max_iter},
        {"h", {{"M", layout.h.M()}, {"N", layout.h.N()}, {"d_v", layout.h.d_v()}, {"d_c", layout.h.d_c()}, {"rows", rows}}},
        {"grid", {{"width", layout.grid.width}, {"height", layout.grid.height}, {"cores", cores}}},
        {"ports",
         {{"r", r},
          {"en", axon_ref_json(layout.ports.en)},
          {"rst", axon_ref_json(layout.ports.rst)},
          {"x_out", x},
          {"done", neuron_ref_json(layout.ports.done)},
          {"zero", neuron_ref_json(layout.ports.zero)}}},
        {"timing",
         {{"iteration_period", t.iteration_period},
          {"word_period", t.word_period},
          {"tail", t.tail},
          {"reset_tick", t.reset_tick},
          {"window_open", t.window_open},
          {"window_close", t.window_close}}},
        {"roles", roles},
        {"xor_neurons", xor_neurons},
    };
    return doc.dump(1) + "\n";
}

DecoderLayout layout_from_json(const std::string& text, const std::string& source) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != "nmgab-layout")
            throw std::invalid_argument("not an nmgab layout document");
        if (doc.at("version").get<int>() != 1) throw std::invalid_argument("unsupported layout version");

        DecoderLayout L;
        const auto variant = parse_variant(doc.at("variant").get<std::string>());
        if (!variant) throw std::invalid_argument("unknown variant");
        L.variant = *variant;
        L.params.max_iter = doc.at("max_iter").get<int>();

        const auto& h = doc.at("h");
        std::vector<BitVector> rows;
        for (const auto& row : h.at("rows")) rows.push_back(parse_bits(row.get<std::string>()));
        L.h = HMatrix(std::move(rows), h.at("d_v").get<int>(), h.at("d_c").get<int>());
        if (L.h.M() != h.at("M").get<int>() || L.h.N() != h.at("N").get<int>())
            throw std::invalid_argument("H dimensions disagree with its rows");

        const auto& g = doc.at("grid");
        L.grid.width = g.at("width").get<int>();
        L.grid.height = g.at("height").get<int>();
        for (const auto& c : g.at("cores")) {
            auto [at, core] = core_from(c);
            if (!L.grid.cores.emplace(at, std::move(core)).second)
                throw std::invalid_argument("duplicate core at " + to_string(at));
        }

        const auto& p = doc.at("ports");
        for (const auto& a : p.at("r")) L.ports.r.push_back(axon_ref_from(a));
        L.ports.en = axon_ref_from(p.at("en"));
        L.ports.rst = axon_ref_from(p.at("rst"));
        for (const auto& n : p.at("x_out")) L.ports.x_out.push_back(neuron_ref_from(n));
        L.ports.done = neuron_ref_from(p.at("done"));
        L.ports.zero = neuron_ref_from(p.at("zero"));

        const auto& t = doc.at("timing");
        L.timing.iteration_period = t.at("iteration_period").get<int>();
        L.timing.word_period = t.at("word_period").get<int>();
        L.timing.tail = t.at("tail").get<int>();
        L.timing.reset_tick = t.at("reset_tick").get<int>();
        L.timing.window_open = t.at("window_open").get<int>();
        L.timing.window_close = t.at("window_close").get<int>();

        for (const auto& [name, at] : doc.at("roles").items()) {
            const auto role = parse_role(name);
            if (!role) throw std::invalid_argument("unknown core role '" + name + "'");
            L.roles[*role] = coord_from(at);
        }
        for (const auto& n : doc.at("xor_neurons")) L.xor_neurons.push_back(neuron_ref_from(n));

        if (auto report = validate_grid(L.grid); !report.ok())
            throw std::invalid_argument("layout grid is invalid:\n" + report.to_string());
        return L;
    } catch (const json::exception& e) {
        throw InputError(source, std::nullopt, e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(source, std::nullopt, e.what());
    }
}

void save_layout(const std::filesystem::path& path, const DecoderLayout& layout) {
    write_text_file(path, layout_to_json(layout));
}

DecoderLayout load_layout(const std::filesystem::path& path) {
    return layout_from_json(read_text_file(path), path.string());
}

void write_trace_csv(std::ostream& out, const TraceLog& trace, const GridConfig& grid) {
    out << kVersionHeader << '\n' << "tick,core_x,core_y,neuron_index,label\n";
    auto label = [&](Coord c, int n) -> const std::string& {
        return grid.at(c).neurons.at(static_cast<std::size_t>(n)).label;
    };
    std::size_t h = 0;
    auto flush_host = [&](std::uint64_t up_to) {
        for (; h < trace.host.size() && trace.host[h].tick <= up_to; ++h) {
            const auto& d = trace.host[h];
            out << d.tick << ",host,host," << d.neuron << ',' << label(d.core, d.neuron) << '\n';
        }
    };
    for (const auto& s : trace.spikes) {
        flush_host(s.tick - 1);
        out << s.tick << ',' << s.core.x << ',' << s.core.y << ',' << s.neuron << ',' << label(s.core, s.neuron)
            << '\n';
    }
    flush_host(std::numeric_limits<std::uint64_t>::max());
}

std::vector<TraceRow> parse_trace_csv(std::istream& in, const std::string& source) {
    std::vector<TraceRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        if (!header_seen) {
            if (line != "tick,core_x,core_y,neuron_index,label")
                throw InputError(source, line_no, "expected trace header \"tick,core_x,core_y,neuron_index,label\"");
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::size_t start = 0;
        for (int i = 0; i < 4; ++i) {
            const auto comma = line.find(',', start);
            if (comma == std::string::npos) throw InputError(source, line_no, "expected 5 comma-separated fields");
            f.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        f.push_back(line.substr(start));
        TraceRow r;
        try {
            r.tick = std::stoull(f[0]);
            if (f[1] == "host" && f[2] == "host") {
                r.core = std::nullopt;
            } else {
                r.core = Coord{std::stoi(f[1]), std::stoi(f[2])};
            }
            r.neuron = std::stoi(f[3]);
        } catch (const std::exception&) {
            throw InputError(source, line_no, "malformed numeric field");
        }
        r.label = f[4];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_result(const WordResult& r) {
    if (!r.observed) return "<none>,missing,0";
    return to_string(r.x_prime) + (r.converged ? ",converged," : ",failed,") + std::to_string(r.output_tick);
}

std::string format_oracle_result(const DecodeResult& r) {
    return to_string(r.x_prime) + (r.converged ? ",converged," : ",failed,") + std::to_string(r.iterations_used);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kVersionHeader << '\n'
        << "w_c,max_iter,ticks_baseline,ticks_xor,energy_baseline_j,energy_xor_j,reduction_percent\n";
    auto energy = [](const std::optional<double>& e) {
        if (!e) return std::string();
        std::ostringstream ss;
        ss << std::setprecision(6) << std::scientific << *e;
        return ss.str();
    };
    for (const auto& r : rows) {
        std::ostringstream pct;
        pct << std::fixed << std::setprecision(2) << r.reduction_percent;
        out << r.w_c << ',' << r.max_iter << ',' << r.ticks_baseline << ',' << r.ticks_xor << ','
            << energy(r.energy_baseline) << ',' << energy(r.energy_xor) << ',' << pct.str() << '\n';
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path.string(), std::nullopt, "cannot open file for writing");
    out << text;
    if (!out) throw InputError(path.string(), std::nullopt, "write failed");
}

}  // namespace nmgab
