#include "alge/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "alge/error.hpp"
#include "alge/io.hpp"
#include "alge/sir.hpp"

namespace alge {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || p != value.data() + value.size())
        throw DataError("config key '" + key + "': bad value '" + value + "'");
    return out;
}

}  // namespace

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "graph") cfg.graph = value;
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "master_seed") cfg.master_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "beta") cfg.beta = value;
        else if (key == "beta_multiplier") cfg.beta_multiplier = parse_number<double>(key, value);
        else if (key == "runs") cfg.runs = parse_number<int>(key, value);
        else if (key == "eps") cfg.eps = parse_number<double>(key, value);
        else if (key == "tol") cfg.tol = parse_number<double>(key, value);
        else if (key == "max_labels") cfg.max_labels = parse_number<std::uint64_t>(key, value);
        else if (key == "pretrain_graphs") cfg.pretrain_graphs = parse_number<int>(key, value);
        else if (key == "pretrain_n_min") cfg.pretrain_n_min = parse_number<int>(key, value);
        else if (key == "pretrain_n_max") cfg.pretrain_n_max = parse_number<int>(key, value);
        else if (key == "pretrain_epochs") cfg.pretrain_epochs = parse_number<int>(key, value);
        else if (key == "pretrain_lr") cfg.pretrain_lr = parse_number<double>(key, value);
        else if (key == "finetune_epochs") cfg.finetune_epochs = parse_number<int>(key, value);
        else if (key == "finetune_lr") cfg.finetune_lr = parse_number<double>(key, value);
        else if (key == "heads") cfg.heads = parse_number<int>(key, value);
        else if (key == "attention_layers") cfg.attention_layers = parse_number<int>(key, value);
        else if (key == "hidden_units") cfg.hidden_units = parse_number<int>(key, value);
        else if (key == "head_hidden") cfg.head_hidden = parse_number<int>(key, value);
        else if (key == "features") cfg.features = value;
        else if (key == "seed_budget") cfg.seed_budget = parse_number<int>(key, value);
        else if (key == "ci_radius") cfg.ci_radius = parse_number<int>(key, value);
        else if (key == "panel") cfg.panel = value;
        else throw ParseError(no, "unknown config key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    return parse_text(read_file(path));
}

std::string RunConfig::resolved_text() const {
    std::ostringstream out;
    out << "graph = " << graph << "\n";
    out << "out_dir = " << out_dir << "\n";
    out << "master_seed = " << master_seed << "\n";
    out << "beta = " << beta << "\n";
    out << "beta_multiplier = " << format_double(beta_multiplier) << "\n";
    out << "runs = " << runs << "\n";
    out << "eps = " << format_double(eps) << "\n";
    out << "tol = " << format_double(tol) << "\n";
    out << "max_labels = " << max_labels << "\n";
    out << "pretrain_graphs = " << pretrain_graphs << "\n";
    out << "pretrain_n_min = " << pretrain_n_min << "\n";
    out << "pretrain_n_max = " << pretrain_n_max << "\n";
    out << "pretrain_epochs = " << pretrain_epochs << "\n";
    out << "pretrain_lr = " << format_double(pretrain_lr) << "\n";
    out << "finetune_epochs = " << finetune_epochs << "\n";
    out << "finetune_lr = " << format_double(finetune_lr) << "\n";
    out << "heads = " << heads << "\n";
    out << "attention_layers = " << attention_layers << "\n";
    out << "hidden_units = " << hidden_units << "\n";
    out << "head_hidden = " << head_hidden << "\n";
    out << "features = " << features << "\n";
    out << "seed_budget = " << seed_budget << "\n";
    out << "ci_radius = " << ci_radius << "\n";
    out << "panel = " << panel << "\n";
    return out.str();
}

std::string RunConfig::hash() const {
    // FNV-1a 64-bit over the resolved text
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : resolved_text()) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<NodeFeature> RunConfig::feature_list() const {
    std::vector<NodeFeature> out;
    std::istringstream ss(features);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(node_feature_from_name(item));
    }
    if (out.empty()) throw DataError("config: features must be nonempty");
    return out;
}

std::vector<std::string> RunConfig::panel_list() const {
    std::vector<std::string> out;
    std::istringstream ss(panel);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double RunConfig::resolve_beta(const Graph& g) const {
    if (beta != "auto") return parse_number<double>("beta", beta);
    double b = beta_multiplier * epidemic_threshold(g);
    if (b > 1.0) {
        std::cerr << "warning: beta_multiplier * beta_c = " << b << " clamped to 1\n";
        b = 1.0;
    }
    return b;
}

void RunConfig::validate() const {
    if (beta != "auto") {
        const double b = parse_number<double>("beta", beta);
        if (!(b >= 0.0 && b <= 1.0)) throw DataError("config: beta must be in [0,1] or 'auto'");
    }
    if (runs < 1) throw DataError("config: runs must be >= 1");
    if (!(eps > 0.0)) throw DataError("config: eps must be positive");
    if (!(tol > 0.0)) throw DataError("config: tol must be positive");
    if (pretrain_graphs < 1) throw DataError("config: pretrain_graphs must be >= 1");
    if (pretrain_n_min < 10 || pretrain_n_max < pretrain_n_min)
        throw DataError("config: bad pretrain size range");
    if (pretrain_epochs < 0 || finetune_epochs < 0) throw DataError("config: negative epochs");
    if (!(pretrain_lr >= 0.0) || !(finetune_lr >= 0.0))
        throw DataError("config: negative learning rate");
    if (heads < 1 || attention_layers < 1 || hidden_units < 1 || head_hidden < 1)
        throw DataError("config: predictor dims must be positive");
    if (seed_budget < 1) throw DataError("config: seed_budget must be >= 1");
    if (ci_radius < 1) throw DataError("config: ci_radius must be >= 1");
    feature_list();
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw DataError("bad generator spec '" + text + "' (expected kind:k=v,...)");
    GeneratorSpec spec;
    spec.kind = trim(text.substr(0, colon));
    if (spec.kind != "ba" && spec.kind != "er")
        throw DataError("unknown generator kind '" + spec.kind + "'");
    std::istringstream ss(text.substr(colon + 1));
    std::string item;
    bool have_n = false, have_m = false;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw DataError("bad generator spec item '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        if (key == "n") {
            spec.n = parse_number<NodeId>(key, value);
            have_n = true;
        } else if (key == "m") {
            spec.m = parse_number<std::int64_t>(key, value);
            have_m = true;
        } else if (key == "seed") {
            spec.seed = parse_number<std::uint64_t>(key, value);
        } else {
            throw DataError("unknown generator spec key '" + key + "'");
        }
    }
    if (!have_n || !have_m) throw DataError("generator spec needs n and m");
    return spec;
}

Graph GeneratorSpec::build() const {
    if (kind == "ba") return generate_ba(n, static_cast<NodeId>(m), seed);
    return generate_er(n, m, seed);
}

}  // namespace alge
