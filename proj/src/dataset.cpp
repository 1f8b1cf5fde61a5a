#include "mtd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "allocation.hpp"
#include "mtd/errors.hpp"
#include "mtd/io_util.hpp"

namespace mtd {

namespace {

// Strict scalar parsers: the whole token must be consumed and the value finite.
bool parse_int(std::string_view tok, long long& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

bool parse_double(std::string_view tok, double& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

long long parse_header_field(std::string_view tok, std::string_view key) {
    if (tok.size() < key.size() + 1 || tok.substr(0, key.size()) != key ||
        tok[key.size()] != '=') {
        throw ParseError(0, "expected " + std::string(key) + "=<int>, got '" + std::string(tok) +
                                "'");
    }
    long long value = 0;
    if (!parse_int(tok.substr(key.size() + 1), value)) {
        throw ParseError(0, "bad integer in '" + std::string(tok) + "'");
    }
    return value;
}

}  // namespace

void validate_dataset(const Dataset& ds) {
    if (ds.class_count < 1 || ds.width < 1) {
        throw DimensionError("dataset declares c=" + std::to_string(ds.class_count) +
                             " l=" + std::to_string(ds.width));
    }
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const LabeledSample& s = ds.samples[i];
        if (static_cast<int>(s.features.size()) != ds.width) {
            throw DimensionError("sample " + std::to_string(i) + ": feature length " +
                                 std::to_string(s.features.size()) + ", expected " +
                                 std::to_string(ds.width));
        }
        if (s.label < 0 || s.label >= ds.class_count) {
            throw DimensionError("sample " + std::to_string(i) + ": label " +
                                 std::to_string(s.label) + " outside [0, " +
                                 std::to_string(ds.class_count) + ")");
        }
        for (double x : s.features) {
            if (!std::isfinite(x)) {
                throw DimensionError("sample " + std::to_string(i) + ": non-finite feature");
            }
        }
    }
}

Dataset generate_synthetic(int class_count, int width, int per_class, double cluster_spread,
                           std::uint64_t seed) {
    if (class_count < 2) throw ConfigError("generate_synthetic: need at least 2 classes");
    if (width < 2) throw ConfigError("generate_synthetic: need width >= 2");
    if (per_class < 1) throw ConfigError("generate_synthetic: per_class must be >= 1");
    if (!(cluster_spread > 0.0)) throw ConfigError("generate_synthetic: spread must be > 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Cluster means: random unit directions, pairwise at least 45 degrees apart.
    const double max_dot = std::cos(std::numbers::pi / 4.0);
    std::vector<FeatureVector> means;
    means.reserve(static_cast<std::size_t>(class_count));
    long long attempts = 0;
    const long long attempt_cap = 20000LL * class_count;
    while (static_cast<int>(means.size()) < class_count) {
        if (++attempts > attempt_cap) {
            throw ConfigError("generate_synthetic: cannot place " + std::to_string(class_count) +
                              " directions at >= 45 degrees in R^" + std::to_string(width));
        }
        FeatureVector m(width);
        for (double& x : m) x = gauss(rng);
        const double n = norm(m);
        if (n == 0.0) continue;
        for (double& x : m) x /= n;
        const bool separated = std::none_of(means.begin(), means.end(), [&](const FeatureVector& u) {
            return dot(m, u) > max_dot;
        });
        if (separated) means.push_back(std::move(m));
    }

    Dataset ds;
    ds.name = "synthetic-c" + std::to_string(class_count) + "-l" + std::to_string(width) + "-s" +
              std::to_string(seed);
    ds.class_count = class_count;
    ds.width = width;
    ds.samples.reserve(static_cast<std::size_t>(class_count) * per_class);
    for (int j = 0; j < class_count; ++j) {
        for (int k = 0; k < per_class; ++k) {
            FeatureVector v(width);
            for (int i = 0; i < width; ++i) {
                v[static_cast<std::size_t>(i)] = means[j][static_cast<std::size_t>(i)] +
                                                 cluster_spread * gauss(rng);
            }
            ds.samples.push_back({std::move(v), j});
        }
    }
    return ds;
}

Dataset load_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open " + path.string());
    }

    auto next_line = [&](std::string& line) {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    std::string line;
    if (!next_line(line)) {
        throw ParseError(0, "empty file");
    }
    const std::vector<std::string_view> head = split(line, ' ');
    if (head.size() != 5 || head[0] != "FEATSET" || head[1] != "v1") {
        throw ParseError(0, "expected 'FEATSET v1 c=<int> l=<int> n=<int>'");
    }
    const long long c = parse_header_field(head[2], "c");
    const long long l = parse_header_field(head[3], "l");
    const long long n = parse_header_field(head[4], "n");
    if (c < 1 || l < 1 || n < 0) {
        throw ParseError(0, "header values out of range: c=" + std::to_string(c) +
                                " l=" + std::to_string(l) + " n=" + std::to_string(n));
    }

    Dataset ds;
    ds.name = path.stem().string();
    ds.class_count = static_cast<int>(c);
    ds.width = static_cast<int>(l);
    ds.samples.reserve(static_cast<std::size_t>(n));

    for (long long record = 1; record <= n; ++record) {
        if (!next_line(line)) {
            throw ParseError(static_cast<std::size_t>(record),
                             "unexpected end of file, header declared n=" + std::to_string(n));
        }
        const std::vector<std::string_view> tok = split(line, ',');
        if (static_cast<long long>(tok.size()) != l + 1) {
            throw ParseError(static_cast<std::size_t>(record),
                             "expected " + std::to_string(l + 1) + " comma-separated fields, got " +
                                 std::to_string(tok.size()));
        }
        long long label = 0;
        if (!parse_int(tok[0], label)) {
            throw ParseError(static_cast<std::size_t>(record),
                             "bad label '" + std::string(tok[0]) + "'");
        }
        if (label < 0 || label >= c) {
            throw ParseError(static_cast<std::size_t>(record),
                             "label " + std::to_string(label) + " outside [0, " +
                                 std::to_string(c) + ")");
        }
        LabeledSample sample;
        sample.label = static_cast<int>(label);
        sample.features.resize(static_cast<std::size_t>(l));
        for (long long i = 0; i < l; ++i) {
            double value = 0.0;
            if (!parse_double(tok[static_cast<std::size_t>(i + 1)], value)) {
                throw ParseError(static_cast<std::size_t>(record),
                                 "bad or non-finite value '" +
                                     std::string(tok[static_cast<std::size_t>(i + 1)]) +
                                     "' in field " + std::to_string(i + 2));
            }
            sample.features[static_cast<std::size_t>(i)] = value;
        }
        ds.samples.push_back(std::move(sample));
    }

    while (next_line(line)) {
        if (!line.empty()) {
            throw ParseError(static_cast<std::size_t>(n) + 1,
                             "trailing content after the " + std::to_string(n) +
                                 " declared records");
        }
    }
    return ds;
}

void save_features(const Dataset& ds, const std::filesystem::path& path) {
    validate_dataset(ds);
    std::string body;
    body.reserve(ds.samples.size() * (static_cast<std::size_t>(ds.width) * 20 + 4) + 64);
    body += "FEATSET v1 c=" + std::to_string(ds.class_count) + " l=" + std::to_string(ds.width) +
            " n=" + std::to_string(ds.samples.size()) + "\n";
    for (const LabeledSample& s : ds.samples) {
        body += std::to_string(s.label);
        for (double x : s.features) {
            body += ',';
            body += format_double(x);
        }
        body += '\n';
    }
    write_text_atomic(path, body);
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double eval_fraction,
                                          std::uint64_t seed) {
    if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
        throw ConfigError("eval_fraction must lie in (0, 1), got " + std::to_string(eval_fraction));
    }
    validate_dataset(ds);

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.class_count));
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        by_class[static_cast<std::size_t>(ds.samples[i].label)].push_back(i);
    }
    std::vector<std::size_t> sizes(by_class.size());
    for (std::size_t j = 0; j < by_class.size(); ++j) sizes[j] = by_class[j].size();

    const auto target =
        static_cast<std::size_t>(std::llround(eval_fraction * static_cast<double>(ds.size())));
    const std::vector<std::size_t> counts = detail::proportional_counts(sizes, target, 0);

    std::mt19937_64 rng(seed);
    std::vector<bool> in_eval(ds.size(), false);
    for (std::size_t j = 0; j < by_class.size(); ++j) {
        std::shuffle(by_class[j].begin(), by_class[j].end(), rng);
        for (std::size_t k = 0; k < counts[j]; ++k) in_eval[by_class[j][k]] = true;
    }

    Dataset train{ds.name + "-train", ds.class_count, ds.width, {}};
    Dataset eval{ds.name + "-eval", ds.class_count, ds.width, {}};
    train.samples.reserve(ds.size() - target);
    eval.samples.reserve(target);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        (in_eval[i] ? eval : train).samples.push_back(ds.samples[i]);
    }
    return {std::move(train), std::move(eval)};
}

}  // namespace mtd
