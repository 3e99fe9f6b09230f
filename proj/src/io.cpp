#include "alge/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "alge/error.hpp"

namespace alge {

std::string meta_prefix(const FileMeta& meta) {
    std::string out;
    if (!meta.command.empty()) out += "# generated-by: " + meta.command + "\n";
    if (!meta.config_hash.empty()) out += "# config-hash: " + meta.config_hash + "\n";
    return out;
}

namespace {

std::string meta_lines(const FileMeta& meta) { return meta_prefix(meta); }

// splits a text into lines, strips CR and '#' comments, returns
// (1-based line number, trimmed content) for nonblank lines; comment-only
// lines that carry key metadata are captured separately via the hook.
struct LineReader {
    std::vector<std::pair<int, std::string>> rows;
    std::vector<std::pair<int, std::string>> comments;

    explicit LineReader(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (auto pos = line.find('#'); pos != std::string::npos) {
                comments.emplace_back(no, line.substr(pos + 1));
                line.resize(pos);
            }
            const auto b = line.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            const auto e = line.find_last_not_of(" \t");
            rows.emplace_back(no, line.substr(b, e - b + 1));
        }
    }

    /// Value of a "# key value" comment, if present.
    std::string comment_value(const std::string& key) const {
        for (const auto& [no, c] : comments) {
            std::istringstream cs(c);
            std::string k;
            if (cs >> k && k == key) {
                std::string rest;
                std::getline(cs, rest);
                const auto b = rest.find_first_not_of(" \t");
                return b == std::string::npos ? "" : rest.substr(b);
            }
        }
        return "";
    }
};

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long long parse_int(const std::string& token, int line_no) {
    long long value = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || p != token.data() + token.size())
        throw ParseError(line_no, "expected integer, got '" + token + "'");
    return value;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

double parse_double(const std::string& token, int line_no) {
    double value = 0.0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || p != token.data() + token.size())
        throw ParseError(line_no, "expected number, got '" + token + "'");
    return value;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw DataError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string influence_to_text(const InfluenceTable& t, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "# nodes " + std::to_string(t.num_nodes()) + "\n";
    out += std::string("# provenance ") +
           (t.provenance == Provenance::Simulated ? "simulated" : "predicted") + "\n";
    out += "node_id,influence,beta,runs\n";
    for (NodeId v = 0; v < t.num_nodes(); ++v) {
        if (!t.has(v)) continue;
        out += std::to_string(v) + "," + format_double(t.value(v)) + "," +
               format_double(t.beta) + "," + std::to_string(t.runs) + "\n";
    }
    return out;
}

InfluenceTable influence_from_text(const std::string& text) {
    LineReader lr(text);
    if (lr.rows.empty()) throw DataError("influence table: empty input");
    if (lr.rows.front().second != "node_id,influence,beta,runs")
        throw ParseError(lr.rows.front().first, "bad influence table header");

    const std::string nodes_str = lr.comment_value("nodes");
    const std::string prov = lr.comment_value("provenance");
    NodeId n = 0;
    if (!nodes_str.empty()) n = static_cast<NodeId>(parse_int(nodes_str, 0));
    double beta = 0.0;
    int runs = 0;
    std::vector<std::pair<NodeId, double>> entries;
    for (std::size_t i = 1; i < lr.rows.size(); ++i) {
        const auto& [no, row] = lr.rows[i];
        auto cols = split(row, ',');
        if (cols.size() != 4) throw ParseError(no, "expected 4 columns");
        const NodeId v = static_cast<NodeId>(parse_int(cols[0], no));
        entries.emplace_back(v, parse_double(cols[1], no));
        beta = parse_double(cols[2], no);
        runs = static_cast<int>(parse_int(cols[3], no));
        n = std::max<NodeId>(n, v + 1);
    }
    InfluenceTable t(n, prov == "predicted" ? Provenance::Predicted : Provenance::Simulated,
                     beta, runs);
    for (const auto& [v, val] : entries) t.set(v, val);
    return t;
}

std::string rank_to_text(const RankTable& t, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "node_id,rank,score,method\n";
    for (NodeId v = 0; v < t.num_nodes(); ++v)
        out += std::to_string(v) + "," + std::to_string(t.rank[v]) + "," +
               format_double(t.score[v]) + "," + t.method + "\n";
    return out;
}

RankTable rank_from_text(const std::string& text) {
    LineReader lr(text);
    if (lr.rows.empty() || lr.rows.front().second != "node_id,rank,score,method")
        throw DataError("bad rank table header");
    RankTable t;
    for (std::size_t i = 1; i < lr.rows.size(); ++i) {
        const auto& [no, row] = lr.rows[i];
        auto cols = split(row, ',');
        if (cols.size() != 4) throw ParseError(no, "expected 4 columns");
        const NodeId v = static_cast<NodeId>(parse_int(cols[0], no));
        if (v != static_cast<NodeId>(t.rank.size()))
            throw ParseError(no, "rank table rows must be contiguous node ids");
        t.rank.push_back(static_cast<int>(parse_int(cols[1], no)));
        t.score.push_back(parse_double(cols[2], no));
        t.method = cols[3];
    }
    if (t.rank.empty()) throw DataError("rank table: no rows");
    return t;
}

std::string representatives_to_text(const RepresentativeSet& r, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "node_id,round\n";
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        out += std::to_string(r.nodes[i]) + "," + std::to_string(r.round[i]) + "\n";
    return out;
}

RepresentativeSet representatives_from_text(const std::string& text) {
    LineReader lr(text);
    if (lr.rows.empty() || lr.rows.front().second != "node_id,round")
        throw DataError("bad representative set header");
    RepresentativeSet r;
    for (std::size_t i = 1; i < lr.rows.size(); ++i) {
        const auto& [no, row] = lr.rows[i];
        auto cols = split(row, ',');
        if (cols.size() != 2) throw ParseError(no, "expected 2 columns");
        r.nodes.push_back(static_cast<NodeId>(parse_int(cols[0], no)));
        r.round.push_back(static_cast<int>(parse_int(cols[1], no)));
    }
    return r;
}

std::string matrix_to_text(const CorrelationMatrix& m, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "# nodes " + std::to_string(m.num_nodes()) + "\n";
    for (NodeId i = 0; i < m.num_nodes(); ++i) {
        for (NodeId j = 0; j < m.num_nodes(); ++j) {
            if (j) out += ',';
            out += format_double(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

CorrelationMatrix matrix_from_text(const std::string& text) {
    LineReader lr(text);
    std::vector<double> values;
    NodeId n = static_cast<NodeId>(lr.rows.size());
    for (const auto& [no, row] : lr.rows) {
        auto cols = split(row, ',');
        if (static_cast<NodeId>(cols.size()) != n)
            throw ParseError(no, "correlation matrix must be square");
        for (const auto& c : cols) values.push_back(parse_double(c, no));
    }
    return CorrelationMatrix::from_values(n, std::move(values));
}

std::string seeds_to_text(const SeedSelection& s, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "# budget " + std::to_string(s.budget) + "\n";
    out += "order,node_id,residual_influence,covered_size,covered_nodes\n";
    for (std::size_t i = 0; i < s.seeds.size(); ++i) {
        out += std::to_string(i + 1) + "," + std::to_string(s.seeds[i]) + "," +
               std::to_string(s.residual[i]) + "," + std::to_string(s.covered[i].size()) + ",";
        for (std::size_t k = 0; k < s.covered[i].size(); ++k) {
            if (k) out += ' ';
            out += std::to_string(s.covered[i][k]);
        }
        out += '\n';
    }
    return out;
}

SeedSelection seeds_from_text(const std::string& text) {
    LineReader lr(text);
    if (lr.rows.empty() ||
        lr.rows.front().second != "order,node_id,residual_influence,covered_size,covered_nodes")
        throw DataError("bad seed selection header");
    SeedSelection s;
    const std::string budget = lr.comment_value("budget");
    if (!budget.empty()) s.budget = static_cast<int>(parse_int(budget, 0));
    for (std::size_t i = 1; i < lr.rows.size(); ++i) {
        const auto& [no, row] = lr.rows[i];
        auto cols = split(row, ',');
        if (cols.size() != 5) throw ParseError(no, "expected 5 columns");
        s.seeds.push_back(static_cast<NodeId>(parse_int(cols[1], no)));
        s.residual.push_back(parse_int(cols[2], no));
        std::vector<NodeId> covered;
        std::istringstream cs(cols[4]);
        long long v;
        while (cs >> v) covered.push_back(static_cast<NodeId>(v));
        if (covered.size() != static_cast<std::size_t>(parse_int(cols[3], no)))
            throw ParseError(no, "covered_size does not match covered_nodes");
        for (NodeId u : covered) s.covered_union.push_back(u);
        s.covered.push_back(std::move(covered));
    }
    std::sort(s.covered_union.begin(), s.covered_union.end());
    return s;
}

std::string overlap_to_text(const OverlapReport& r, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "node_id,overlap,individual_influence,attributed_infected,influence_decrease\n";
    for (std::size_t i = 0; i < r.seeds.size(); ++i)
        out += std::to_string(r.seeds[i]) + "," + std::to_string(r.overlap[i]) + "," +
               format_double(r.individual[i]) + "," + format_double(r.attributed[i]) + "," +
               format_double(r.decrease[i]) + "\n";
    return out;
}

std::string curve_to_text(const std::vector<double>& curve, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "step,ratio\n";
    for (std::size_t t = 0; t < curve.size(); ++t)
        out += std::to_string(t) + "," + format_double(curve[t]) + "\n";
    return out;
}

std::string disputation_to_text(const DisputationTable& d, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    out += "node_id,true_rank";
    for (const auto& m : d.methods) out += "," + m;
    out += ",disputation\n";
    for (NodeId v = 0; v < d.num_nodes(); ++v) {
        out += std::to_string(v) + "," + std::to_string(d.true_rank[v]);
        for (int r : d.panel_ranks[v]) out += "," + std::to_string(r);
        out += "," + format_double(d.disputation[v]) + "\n";
    }
    return out;
}

std::string graph_to_text(const Graph& g, const FileMeta& meta) {
    std::string out = meta_lines(meta);
    std::ostringstream body;
    write_edge_list(body, g);
    return out + body.str();
}

std::string params_to_text(const PredictorParams& p, const FileMeta& meta) {
    std::ostringstream out;
    out << meta_lines(meta);
    out << "alge-params 1\n";
    out << "input_dim " << p.dims.input_dim << "\n";
    out << "attention_layers " << p.dims.attention_layers << "\n";
    out << "heads " << p.dims.heads << "\n";
    out << "units " << p.dims.units << "\n";
    out << "head_hidden " << p.dims.head_hidden << "\n";
    auto emit_mat = [&](const std::string& name, const Mat& m) {
        out << name << " " << m.rows << " " << m.cols << "\n";
        for (int r = 0; r < m.rows; ++r) {
            for (int c = 0; c < m.cols; ++c) {
                if (c) out << ' ';
                out << format_double(m.at(r, c));
            }
            out << "\n";
        }
    };
    auto emit_vec = [&](const std::string& name, const std::vector<double>& v) {
        out << name << " " << v.size() << "\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ' ';
            out << format_double(v[i]);
        }
        out << "\n";
    };
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        const auto& layer = p.layers[l];
        out << "layer " << l << " in " << layer.in_dim << " out " << layer.out_dim
            << " combine " << (layer.average ? "average" : "concat") << "\n";
        for (std::size_t h = 0; h < layer.heads.size(); ++h) {
            emit_mat("w_src", layer.heads[h].w_src);
            emit_mat("w_dst", layer.heads[h].w_dst);
            emit_vec("attn", layer.heads[h].attn);
        }
    }
    emit_mat("head_w1", p.head_w1);
    emit_vec("head_b1", p.head_b1);
    emit_mat("head_w2", p.head_w2);
    emit_vec("head_b2", p.head_b2);
    return out.str();
}

PredictorParams params_from_text(const std::string& text) {
    LineReader lr(text);
    std::size_t pos = 0;
    auto next_row = [&]() -> const std::pair<int, std::string>& {
        if (pos >= lr.rows.size()) throw DataError("predictor params: truncated file");
        return lr.rows[pos++];
    };
    auto expect_kv = [&](const std::string& key) {
        const auto& [no, row] = next_row();
        std::istringstream ss(row);
        std::string k;
        long long v;
        if (!(ss >> k >> v) || k != key) throw ParseError(no, "expected '" + key + " <int>'");
        return v;
    };

    {
        const auto& [no, row] = next_row();
        if (row != "alge-params 1") throw ParseError(no, "bad params header");
    }
    GatDims dims;
    dims.input_dim = static_cast<int>(expect_kv("input_dim"));
    dims.attention_layers = static_cast<int>(expect_kv("attention_layers"));
    dims.heads = static_cast<int>(expect_kv("heads"));
    dims.units = static_cast<int>(expect_kv("units"));
    dims.head_hidden = static_cast<int>(expect_kv("head_hidden"));
    dims.validate();

    auto read_values = [&](double* dst, std::size_t count) {
        std::size_t got = 0;
        while (got < count) {
            const auto& [no, row] = next_row();
            std::istringstream ss(row);
            std::string tok;
            while (ss >> tok) {
                if (got >= count) throw ParseError(no, "too many values");
                dst[got++] = parse_double(tok, no);
            }
        }
    };
    auto read_mat = [&](const std::string& name) {
        const auto& [no, row] = next_row();
        std::istringstream ss(row);
        std::string k;
        int r, c;
        if (!(ss >> k >> r >> c) || k != name)
            throw ParseError(no, "expected '" + name + " <rows> <cols>'");
        Mat m(r, c);
        read_values(m.a.data(), m.a.size());
        return m;
    };
    auto read_vec = [&](const std::string& name) {
        const auto& [no, row] = next_row();
        std::istringstream ss(row);
        std::string k;
        std::size_t len;
        if (!(ss >> k >> len) || k != name)
            throw ParseError(no, "expected '" + name + " <len>'");
        std::vector<double> v(len);
        read_values(v.data(), len);
        return v;
    };

    PredictorParams p;
    p.dims = dims;
    for (int l = 0; l < dims.attention_layers; ++l) {
        const auto& [no, row] = next_row();
        std::istringstream ss(row);
        std::string k, ink, outk, combk, comb;
        int idx, in_dim, out_dim;
        if (!(ss >> k >> idx >> ink >> in_dim >> outk >> out_dim >> combk >> comb) ||
            k != "layer" || ink != "in" || outk != "out" || combk != "combine")
            throw ParseError(no, "bad layer header");
        AttnLayerParams layer;
        layer.in_dim = in_dim;
        layer.out_dim = out_dim;
        layer.average = comb == "average";
        for (int h = 0; h < dims.heads; ++h) {
            HeadParams hp;
            hp.w_src = read_mat("w_src");
            hp.w_dst = read_mat("w_dst");
            hp.attn = read_vec("attn");
            if (hp.w_src.rows != out_dim || hp.w_src.cols != in_dim ||
                hp.w_dst.rows != out_dim || hp.w_dst.cols != in_dim ||
                static_cast<int>(hp.attn.size()) != out_dim)
                throw DataError("predictor params: head shape mismatch");
            layer.heads.push_back(std::move(hp));
        }
        p.layers.push_back(std::move(layer));
    }
    p.head_w1 = read_mat("head_w1");
    p.head_b1 = read_vec("head_b1");
    p.head_w2 = read_mat("head_w2");
    p.head_b2 = read_vec("head_b2");
    if (p.head_w1.rows != dims.head_hidden || p.head_w2.cols != dims.head_hidden ||
        p.head_b1.size() != static_cast<std::size_t>(dims.head_hidden) || p.head_b2.size() != 1)
        throw DataError("predictor params: head shape mismatch");
    return p;
}

}  // namespace alge
