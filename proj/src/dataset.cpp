#include "cgpc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "cgpc/errors.hpp"
#include "cgpc/rng.hpp"

namespace cgpc {

void Dataset::recount() {
    class_counts = {0, 0};
    for (const Sample& s : samples) ++class_counts[static_cast<std::size_t>(s.label)];
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.push_back(cell);
    return cells;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_number(const std::string& cell, const std::string& path, int row, int col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        throw InputError(path + ": row " + std::to_string(row) + ", column " +
                         std::to_string(col + 1) + ": non-numeric value '" + cell + "'");
    return value;
}

} // namespace

Dataset load_csv(const std::string& path, const CsvSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": missing header row");
    strip_cr(line);
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);

    const std::vector<std::string> header = split_line(line);
    int label_col = -1;
    int id_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == spec.label_column) label_col = static_cast<int>(i);
        if (!spec.id_column.empty() && header[i] == spec.id_column) id_col = static_cast<int>(i);
    }
    if (label_col < 0)
        throw InputError(path + ": label column '" + spec.label_column + "' not found in header");
    if (!spec.id_column.empty() && id_col < 0)
        throw InputError(path + ": id column '" + spec.id_column + "' not found in header");

    std::vector<int> feature_cols;
    Dataset ds;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (static_cast<int>(i) == label_col || static_cast<int>(i) == id_col) continue;
        feature_cols.push_back(static_cast<int>(i));
        ds.input_names.push_back(header[i]);
    }
    const int n_features = static_cast<int>(feature_cols.size());
    if (n_features < 1) throw InputError(path + ": no feature columns");
    ds.layout = Layout::flat(n_features);

    int row = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        ++row;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw InputError(path + ": row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(cells.size()));

        const std::string& label_cell = cells[static_cast<std::size_t>(label_col)];
        auto it = spec.class_map.find(label_cell);
        if (it == spec.class_map.end())
            throw InputError(path + ": row " + std::to_string(row) + ": label '" + label_cell +
                             "' is not in the declared class map");

        Sample s;
        s.id = id_col >= 0 ? cells[static_cast<std::size_t>(id_col)] : "r" + std::to_string(row);
        s.label = it->second;
        s.synthetic = false;
        s.features = Matrix(1, n_features);
        for (int f = 0; f < n_features; ++f) {
            const int col = feature_cols[static_cast<std::size_t>(f)];
            s.features.at(0, f) = parse_number(cells[static_cast<std::size_t>(col)], path, row, col);
        }
        ds.samples.push_back(std::move(s));
    }
    ds.recount();
    return ds;
}

namespace {

// Validates the shared preconditions of the channel-combining operations and
// returns, per channel dataset, the sample index matching each sample of the
// first dataset (matched by id, labels required to agree).
std::vector<std::vector<int>> match_channels(const std::vector<Dataset>& channels) {
    if (channels.empty()) throw InputError("channel assembly: no input datasets");
    const Dataset& first = channels.front();
    if (first.layout.kind != Layout::Kind::Flat)
        throw InputError("channel assembly: inputs must be flat datasets");
    for (const Dataset& ds : channels) {
        if (ds.layout.kind != Layout::Kind::Flat || ds.layout.n_features != first.layout.n_features)
            throw InputError("channel assembly: all channels must be flat with equal length");
        if (ds.size() != first.size())
            throw InputError("channel assembly: sample id sets differ between channels");
    }

    std::vector<std::vector<int>> order(channels.size());
    std::unordered_map<std::string, int> first_ids;
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (!first_ids.emplace(first.samples[i].id, static_cast<int>(i)).second)
            throw InputError("channel assembly: duplicate sample id '" + first.samples[i].id + "'");
    }
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const Dataset& ds = channels[c];
        std::vector<int> map_to_first(ds.size(), -1);
        std::vector<int> in_first_order(first.size(), -1);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            auto it = first_ids.find(ds.samples[i].id);
            if (it == first_ids.end())
                throw InputError("channel assembly: sample id '" + ds.samples[i].id +
                                 "' missing from the first channel");
            if (in_first_order[static_cast<std::size_t>(it->second)] != -1)
                throw InputError("channel assembly: duplicate sample id '" + ds.samples[i].id + "'");
            in_first_order[static_cast<std::size_t>(it->second)] = static_cast<int>(i);
            if (ds.samples[i].label != first.samples[static_cast<std::size_t>(it->second)].label)
                throw InputError("channel assembly: label disagreement for sample id '" +
                                 ds.samples[i].id + "'");
        }
        order[c] = std::move(in_first_order);
    }
    return order;
}

} // namespace

Dataset assemble_sequential(const std::vector<Dataset>& channel_datasets) {
    const auto order = match_channels(channel_datasets);
    const Dataset& first = channel_datasets.front();
    const int n_channels = static_cast<int>(channel_datasets.size());
    const int n_timesteps = first.layout.n_features;

    Dataset out;
    out.layout = Layout::sequential(n_channels, n_timesteps);
    for (int c = 0; c < n_channels; ++c) out.input_names.push_back("c" + std::to_string(c));
    for (std::size_t i = 0; i < first.size(); ++i) {
        Sample s;
        s.id = first.samples[i].id;
        s.label = first.samples[i].label;
        s.synthetic = false;
        s.features = Matrix(n_timesteps, n_channels);
        for (int c = 0; c < n_channels; ++c) {
            const Dataset& ds = channel_datasets[static_cast<std::size_t>(c)];
            const Sample& src =
                ds.samples[static_cast<std::size_t>(order[static_cast<std::size_t>(c)][i])];
            for (int t = 0; t < n_timesteps; ++t) s.features.at(t, c) = src.features.at(0, t);
        }
        out.samples.push_back(std::move(s));
    }
    out.recount();
    return out;
}

Dataset concat_flat(const std::vector<Dataset>& channel_datasets) {
    const auto order = match_channels(channel_datasets);
    const Dataset& first = channel_datasets.front();
    const int n_channels = static_cast<int>(channel_datasets.size());
    const int per_channel = first.layout.n_features;

    Dataset out;
    out.layout = Layout::flat(n_channels * per_channel);
    for (const Dataset& ds : channel_datasets)
        out.input_names.insert(out.input_names.end(), ds.input_names.begin(), ds.input_names.end());
    for (std::size_t i = 0; i < first.size(); ++i) {
        Sample s;
        s.id = first.samples[i].id;
        s.label = first.samples[i].label;
        s.synthetic = false;
        s.features = Matrix(1, n_channels * per_channel);
        for (int c = 0; c < n_channels; ++c) {
            const Dataset& ds = channel_datasets[static_cast<std::size_t>(c)];
            const Sample& src =
                ds.samples[static_cast<std::size_t>(order[static_cast<std::size_t>(c)][i])];
            for (int t = 0; t < per_channel; ++t)
                s.features.at(0, c * per_channel + t) = src.features.at(0, t);
        }
        out.samples.push_back(std::move(s));
    }
    out.recount();
    return out;
}

Split stratified_split(const Dataset& dataset, std::array<double, 3> fractions,
                       std::uint64_t seed) {
    double sum = 0.0;
    for (double f : fractions) {
        if (f <= 0.0) throw ConfigError("split: fractions must be positive");
        sum += f;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw ConfigError("split: fractions must sum to 1");

    std::array<std::vector<int>, 2> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_class[static_cast<std::size_t>(dataset.samples[i].label)].push_back(static_cast<int>(i));

    Split split;
    split.fractions = fractions;
    Rng rng(seed);
    for (int cls = 0; cls < 2; ++cls) {
        auto& indices = by_class[static_cast<std::size_t>(cls)];
        const auto n = static_cast<long long>(indices.size());
        if (n == 0)
            throw ConfigError("split: class " + std::to_string(cls) + " has no samples");
        // Half-away-from-zero on test, then validation; the remainder trains.
        const long long n_test = std::llround(fractions[2] * static_cast<double>(n));
        const long long n_val = std::llround(fractions[1] * static_cast<double>(n));
        const long long n_train = n - n_test - n_val;
        if (n_train <= 0)
            throw ConfigError("split: class " + std::to_string(cls) +
                              " is too small for the requested fractions");
        rng.shuffle(indices);
        for (long long i = 0; i < n; ++i) {
            const int idx = indices[static_cast<std::size_t>(i)];
            if (i < n_test)
                split.test.push_back(idx);
            else if (i < n_test + n_val)
                split.validation.push_back(idx);
            else
                split.train.push_back(idx);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

namespace {

Dataset load_manifest_impl(const std::string& manifest_path, const std::string* layout_override) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset manifest: " + manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(manifest_path + ": invalid JSON: " + e.what());
    }

    std::string layout;
    std::vector<std::string> files;
    CsvSpec spec;
    std::vector<std::string> region_order;
    try {
        layout = j.at("layout").get<std::string>();
        files = j.at("files").get<std::vector<std::string>>();
        spec.label_column = j.at("label_column").get<std::string>();
        for (const auto& [key, value] : j.at("class_map").items())
            spec.class_map[key] = value.get<int>();
        if (j.contains("region_order"))
            region_order = j.at("region_order").get<std::vector<std::string>>();
        if (j.contains("id_column")) spec.id_column = j.at("id_column").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(manifest_path + ": missing or mistyped field: " + e.what());
    }
    if (layout_override != nullptr) layout = *layout_override;

    if (layout != "flat" && layout != "sequential")
        throw InputError(manifest_path + ": layout must be 'flat' or 'sequential'");
    if (files.empty()) throw InputError(manifest_path + ": 'files' must name at least one CSV");
    if (spec.class_map.size() != 2)
        throw InputError(manifest_path + ": class_map must have exactly two entries");
    {
        int zeros = 0, ones = 0;
        for (const auto& [name, cls] : spec.class_map) {
            if (cls == 0) ++zeros;
            else if (cls == 1) ++ones;
        }
        if (zeros != 1 || ones != 1)
            throw InputError(manifest_path + ": class_map values must be exactly {0, 1}");
    }
    if (!region_order.empty() && region_order.size() != files.size())
        throw InputError(manifest_path + ": region_order length must match files");

    const auto base = std::filesystem::path(manifest_path).parent_path();
    std::vector<Dataset> channels;
    for (const std::string& f : files) {
        std::filesystem::path p(f);
        if (p.is_relative()) p = base / p;
        channels.push_back(load_csv(p.string(), spec));
    }

    auto channel_name = [&](std::size_t c) {
        if (c < region_order.size()) return region_order[c];
        return std::filesystem::path(files[c]).stem().string();
    };

    if (layout == "sequential") {
        Dataset ds = assemble_sequential(channels);
        for (std::size_t c = 0; c < channels.size(); ++c) ds.input_names[c] = channel_name(c);
        return ds;
    }
    if (channels.size() == 1) return std::move(channels.front());
    // Multi-file flat: concatenate, prefixing names with their channel.
    for (std::size_t c = 0; c < channels.size(); ++c)
        for (std::string& name : channels[c].input_names) name = channel_name(c) + "." + name;
    return concat_flat(channels);
}

} // namespace

Dataset load_dataset_manifest(const std::string& manifest_path) {
    return load_manifest_impl(manifest_path, nullptr);
}

Dataset load_dataset_manifest(const std::string& manifest_path,
                              const std::string& layout_override) {
    return load_manifest_impl(manifest_path, &layout_override);
}

std::vector<Sample> gather(const Dataset& dataset, const std::vector<int>& indices) {
    std::vector<Sample> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(dataset.samples[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace cgpc
