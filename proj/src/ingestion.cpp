#include "contrastfs/ingestion.hpp"

#include "contrastfs/error.hpp"
#include "contrastfs/rng.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace contrastfs {

namespace {

// ---------------------------------------------------------------------------
// CSV

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::vector<std::string>> parse_records(const std::string& text, char delimiter)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_record = [&] {
        const bool blank = record.empty() && field.empty() && !field_started;
        if (!blank) {
            record.push_back(std::move(field));
            records.push_back(std::move(record));
        }
        record.clear();
        field.clear();
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
            field_started = true;
        } else if (c == delimiter) {
            record.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            end_record();
            ++line;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) {
        throw Error(ErrorKind::Parse, "unterminated quoted field near line " + std::to_string(line));
    }
    end_record();
    return records;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_integer(std::string_view s, long long& out)
{
    s = trim(s);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

/// Dense ids for the distinct labels: integer labels sort numerically,
/// anything else lexicographically.
std::vector<std::string> infer_class_names(const std::vector<std::string>& raw)
{
    std::vector<std::string> names(raw.begin(), raw.end());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::vector<long long> numeric(names.size());
    bool all_integer = true;
    for (std::size_t i = 0; i < names.size() && all_integer; ++i) {
        all_integer = parse_integer(names[i], numeric[i]);
    }
    if (all_integer) {
        std::vector<std::size_t> order(names.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
        std::vector<std::string> sorted;
        for (const auto i : order) {
            sorted.push_back(names[i]);
        }
        names = std::move(sorted);
    }
    return names;
}

// ---------------------------------------------------------------------------
// IDX

class GzReader {
public:
    explicit GzReader(const std::filesystem::path& path) : m_path(path.string())
    {
        m_file = gzopen(m_path.c_str(), "rb");
        if (m_file == nullptr) {
            throw Error(ErrorKind::Io, "cannot open '" + m_path + "'");
        }
    }
    ~GzReader() { gzclose(m_file); }
    GzReader(const GzReader&) = delete;
    GzReader& operator=(const GzReader&) = delete;

    /// Reads exactly `size` bytes or throws Truncated.
    void read(void* out, std::size_t size)
    {
        auto* dst = static_cast<unsigned char*>(out);
        while (size > 0) {
            const auto chunk = static_cast<unsigned>(std::min<std::size_t>(size, 1u << 30));
            const int got = gzread(m_file, dst, chunk);
            if (got < 0) {
                throw Error(ErrorKind::Io, "read error in '" + m_path + "'");
            }
            if (got == 0) {
                throw Error(ErrorKind::Truncated, "'" + m_path + "' ends early");
            }
            dst += got;
            size -= static_cast<std::size_t>(got);
        }
    }

    std::uint32_t read_be32()
    {
        std::array<unsigned char, 4> b{};
        read(b.data(), b.size());
        return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
    }

    const std::string& path() const noexcept { return m_path; }

private:
    std::string m_path;
    gzFile m_file = nullptr;
};

constexpr std::uint32_t idx_images_magic = 0x00000803;
constexpr std::uint32_t idx_labels_magic = 0x00000801;

void expect_magic(GzReader& in, std::uint32_t expected)
{
    const std::uint32_t magic = in.read_be32();
    if (magic != expected) {
        std::ostringstream msg;
        msg << "'" << in.path() << "' has magic 0x" << std::hex << magic << ", expected 0x" << expected;
        throw Error(ErrorKind::BadMagic, msg.str());
    }
}

// ---------------------------------------------------------------------------
// binary cache

constexpr std::array<char, 8> cache_magic{'C', 'F', 'S', 'D', 'A', 'T', 'A', '\0'};
constexpr std::uint32_t cache_version = 1;

template <typename T>
void put_le(std::ostream& out, T value)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    auto bits = std::bit_cast<U>(value);
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bytes[i] = static_cast<char>(bits & 0xFF);
        bits >>= 8;
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const std::string& path)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    std::array<unsigned char, sizeof(U)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw Error(ErrorKind::Truncated, "'" + path + "' ends early");
    }
    U bits = 0;
    for (std::size_t i = sizeof(U); i-- > 0;) {
        bits = (bits << 8) | bytes[i];
    }
    return std::bit_cast<T>(bits);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options)
{
    const auto records = parse_records(read_text(path), options.delimiter);
    std::size_t first_data = 0;
    std::vector<std::string> header;
    if (options.has_header) {
        if (records.empty()) {
            throw Error(ErrorKind::Parse, "'" + path.string() + "' has no header row");
        }
        header = records.front();
        for (auto& h : header) {
            h = std::string(trim(h));
        }
        first_data = 1;
    }
    if (records.size() <= first_data) {
        throw Error(ErrorKind::EmptyDataset, "'" + path.string() + "' has no data rows");
    }
    const std::size_t columns = records[first_data].size();

    std::size_t label_col = 0;
    if (const auto* name = std::get_if<std::string>(&options.label_column)) {
        const auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) {
            throw Error(ErrorKind::MissingLabelColumn, "no column named '" + *name + "' in '" + path.string() + "'");
        }
        label_col = static_cast<std::size_t>(it - header.begin());
    } else {
        label_col = std::get<std::size_t>(options.label_column);
    }
    if (label_col >= columns) {
        throw Error(ErrorKind::MissingLabelColumn,
                    "label column " + std::to_string(label_col) + " not present (" + std::to_string(columns) + " columns)");
    }
    if (columns < 2) {
        throw Error(ErrorKind::EmptyDataset, "'" + path.string() + "' has no feature columns");
    }
    if (!header.empty() && header.size() != columns) {
        throw Error(ErrorKind::Parse, "header has " + std::to_string(header.size()) + " fields, rows have " +
                                          std::to_string(columns));
    }

    const std::size_t n = records.size() - first_data;
    const std::size_t d = columns - 1;
    std::vector<double> values;
    values.reserve(n * d);
    std::vector<std::string> raw_labels;
    raw_labels.reserve(n);
    for (std::size_t r = first_data; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row = r - first_data;
        if (rec.size() != columns) {
            throw Error(ErrorKind::Parse, "row " + std::to_string(row) + " has " + std::to_string(rec.size()) +
                                              " fields, expected " + std::to_string(columns));
        }
        for (std::size_t c = 0; c < columns; ++c) {
            if (c == label_col) {
                raw_labels.emplace_back(trim(rec[c]));
                continue;
            }
            double v = 0.0;
            if (!parse_double(rec[c], v)) {
                throw Error(ErrorKind::Parse, "row " + std::to_string(row) + ", column " + std::to_string(c) +
                                                  ": cannot parse '" + rec[c] + "' as a number");
            }
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::NonFiniteValue,
                            "non-finite value at row " + std::to_string(row) + ", column " + std::to_string(c));
            }
            values.push_back(v);
        }
    }

    std::vector<std::string> class_names =
        options.class_names.empty() ? infer_class_names(raw_labels) : options.class_names;
    std::map<std::string, Label> ids;
    for (std::size_t k = 0; k < class_names.size(); ++k) {
        ids.emplace(class_names[k], static_cast<Label>(k));
    }
    std::vector<Label> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = ids.find(raw_labels[i]);
        if (it == ids.end()) {
            throw Error(ErrorKind::LabelOutOfRange, "row " + std::to_string(i) + ": unknown label '" + raw_labels[i] + "'");
        }
        labels.push_back(it->second);
    }

    std::vector<std::string> feature_names;
    if (!header.empty()) {
        for (std::size_t c = 0; c < columns; ++c) {
            if (c != label_col) {
                feature_names.push_back(header[c]);
            }
        }
    }
    const std::size_t classes = class_names.size();
    return Dataset(Matrix(n, d, std::move(values)), std::move(labels), classes, std::move(feature_names),
                   std::move(class_names));
}

Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path)
{
    GzReader images(images_path);
    expect_magic(images, idx_images_magic);
    const std::uint32_t count = images.read_be32();
    const std::uint32_t rows = images.read_be32();
    const std::uint32_t cols = images.read_be32();

    GzReader labels_in(labels_path);
    expect_magic(labels_in, idx_labels_magic);
    const std::uint32_t label_count = labels_in.read_be32();
    if (label_count != count) {
        throw Error(ErrorKind::CountMismatch,
                    std::to_string(count) + " images but " + std::to_string(label_count) + " labels");
    }

    const std::size_t d = std::size_t{rows} * cols;
    std::vector<unsigned char> pixels(std::size_t{count} * d);
    images.read(pixels.data(), pixels.size());
    std::vector<unsigned char> raw(count);
    labels_in.read(raw.data(), raw.size());

    std::array<bool, 256> present{};
    for (const auto y : raw) {
        present[y] = true;
    }
    std::array<Label, 256> dense{};
    std::vector<std::string> class_names;
    for (std::size_t v = 0; v < present.size(); ++v) {
        if (present[v]) {
            dense[v] = static_cast<Label>(class_names.size());
            class_names.push_back(std::to_string(v));
        }
    }
    std::vector<Label> labels(count);
    for (std::size_t i = 0; i < count; ++i) {
        labels[i] = dense[raw[i]];
    }
    std::vector<double> values(pixels.begin(), pixels.end());
    const std::size_t classes = class_names.size();
    return Dataset(Matrix(count, d, std::move(values)), std::move(labels), classes, {}, std::move(class_names));
}

void save_cache(const Dataset& dataset, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    }
    out.write(cache_magic.data(), cache_magic.size());
    put_le<std::uint32_t>(out, cache_version);
    put_le<std::uint64_t>(out, dataset.samples());
    put_le<std::uint64_t>(out, dataset.features());
    put_le<std::uint64_t>(out, dataset.class_count());
    for (const double v : dataset.matrix().data()) {
        put_le<double>(out, v);
    }
    for (const auto y : dataset.labels()) {
        put_le<std::uint32_t>(out, y);
    }
    if (!out) {
        throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
    }
}

Dataset load_cache(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    }
    const std::string p = path.string();
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size())) {
        throw Error(ErrorKind::Truncated, "'" + p + "' ends early");
    }
    if (magic != cache_magic) {
        throw Error(ErrorKind::BadMagic, "'" + p + "' is not a dataset cache");
    }
    const auto version = get_le<std::uint32_t>(in, p);
    if (version != cache_version) {
        throw Error(ErrorKind::BadMagic, "'" + p + "' has unsupported cache version " + std::to_string(version));
    }
    const auto n = get_le<std::uint64_t>(in, p);
    const auto d = get_le<std::uint64_t>(in, p);
    const auto classes = get_le<std::uint64_t>(in, p);
    std::vector<double> values(n * d);
    for (auto& v : values) {
        v = get_le<double>(in, p);
    }
    std::vector<Label> labels(n);
    for (auto& y : labels) {
        y = get_le<std::uint32_t>(in, p);
    }
    return Dataset(Matrix(n, d, std::move(values)), std::move(labels), classes);
}

Split split(const Dataset& dataset, const SplitSpec& spec)
{
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "train fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = dataset.samples();
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.train_fraction));
    Rng rng(spec.seed);
    std::vector<std::size_t> train;

    if (spec.stratified) {
        std::vector<std::vector<std::size_t>> members(dataset.class_count());
        const auto labels = dataset.labels();
        for (std::size_t i = 0; i < n; ++i) {
            members[labels[i]].push_back(i);
        }
        std::vector<std::size_t> take(members.size());
        std::vector<bool> bumpable(members.size());
        std::size_t assigned = 0;
        for (std::size_t k = 0; k < members.size(); ++k) {
            const std::size_t nk = members[k].size();
            if (nk < 2) {
                throw Error(ErrorKind::ClassTooSmall,
                            "class " + std::to_string(k) + " has " + std::to_string(nk) + " samples, need 2");
            }
            rng.shuffle(std::span<std::size_t>(members[k]));
            // The slack keeps products such as 150 * 0.7 from flooring to 104.
            const double share = static_cast<double>(nk) * spec.train_fraction;
            const auto floor_k = static_cast<std::size_t>(std::floor(share + 1e-9));
            take[k] = std::clamp<std::size_t>(floor_k, 1, nk - 1);
            // Only classes with a fractional share take part of the remainder.
            bumpable[k] = take[k] == floor_k && share - static_cast<double>(floor_k) > 1e-9 && take[k] + 1 <= nk - 1;
            assigned += take[k];
        }
        std::vector<std::size_t> order(members.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order));
        for (const auto k : order) {
            if (assigned >= target) {
                break;
            }
            if (bumpable[k]) {
                ++take[k];
                ++assigned;
            }
        }
        for (std::size_t k = 0; k < members.size(); ++k) {
            train.insert(train.end(), members[k].begin(), members[k].begin() + static_cast<std::ptrdiff_t>(take[k]));
        }
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(all));
        train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(target));
    }

    std::sort(train.begin(), train.end());
    std::vector<bool> in_train(n, false);
    for (const auto i : train) {
        in_train[i] = true;
    }
    std::vector<std::size_t> test;
    test.reserve(n - train.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_train[i]) {
            test.push_back(i);
        }
    }
    Split out;
    out.train = dataset.subset(train);
    out.test = dataset.subset(test);
    out.train_indices = std::move(train);
    out.test_indices = std::move(test);
    return out;
}

Dataset add_gaussian_noise(const Dataset& dataset, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::InvalidArgument, "noise sigma must be a finite non-negative number");
    }
    std::vector<double> values(dataset.matrix().data().begin(), dataset.matrix().data().end());
    if (sigma > 0.0) {
        Rng rng(seed);
        for (auto& v : values) {
            v += sigma * rng.normal();
        }
    }
    Dataset noisy(Matrix(dataset.samples(), dataset.features(), std::move(values)),
                  std::vector<Label>(dataset.labels().begin(), dataset.labels().end()), dataset.class_count(),
                  dataset.feature_names(), dataset.class_names());
    validate_dataset(noisy);
    return noisy;
}

}  // namespace contrastfs
