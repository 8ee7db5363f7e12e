#include "sentord/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "sentord/errors.hpp"

using nlohmann::json;

namespace sentord {

namespace {

constexpr char kMagic[4] = {'S', 'O', 'R', 'D'};

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_tensor(std::string& out, const Tensor& t) {
    for (std::size_t i = 0; i < t.numel(); ++i) put_f64(out, t[i]);
}

class Reader {
public:
    Reader(const std::string& bytes, std::size_t offset, std::size_t end)
        : bytes_(bytes), pos_(offset), end_(end) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str(std::size_t len) {
        need(len);
        std::string s = bytes_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    void tensor(Tensor& t) {
        for (std::size_t i = 0; i < t.numel(); ++i) t[i] = f64();
    }

    unsigned char raw_byte() {
        need(1);
        return byte();
    }

    bool exhausted() const { return pos_ == end_; }

private:
    void need(std::size_t n) {
        if (end_ - pos_ < n) throw TruncatedFile("model file ends mid-record");
    }
    unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }

    const std::string& bytes_;
    std::size_t pos_;
    std::size_t end_;
};

}  // namespace

void save_model(const std::string& path, const ModelBundle& m, const AdadeltaState* optimizer) {
    json header{{"encoder", encoder_name(m.config.encoder)},
                {"dim", m.config.dim},
                {"hidden", m.config.hidden},
                {"filter_len", m.config.filter_len},
                {"vocab_size", m.config.vocab_size},
                {"init", m.config.init_spec},
                {"seed", m.config.seed}};
    const std::string header_bytes = header.dump();

    std::string payload;
    put_u32(payload, kModelFormatVersion);
    put_u32(payload, static_cast<std::uint32_t>(header_bytes.size()));
    payload += header_bytes;
    const auto params = m.params();
    for (const Parameter* p : params) put_tensor(payload, p->value);
    if (optimizer) {
        if (optimizer->accum_grad.size() != params.size()) {
            throw ShapeError("optimizer state does not match parameter list");
        }
        payload.push_back(1);
        for (const Tensor& t : optimizer->accum_grad) put_tensor(payload, t);
        for (const Tensor& t : optimizer->accum_delta) put_tensor(payload, t);
    } else {
        payload.push_back(0);
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path + " for writing");
    f.write(kMagic, 4);
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    std::string tail;
    put_u64(tail, fnv1a(payload));
    f.write(tail.data(), static_cast<std::streamsize>(tail.size()));
    if (!f) throw DataError("failed writing " + path);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    if (bytes.size() < 4 + 4 + 4 + 8) throw TruncatedFile("model file too short");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw UnsupportedFormat("not a model file (bad magic)");
    }
    const std::string payload = bytes.substr(4, bytes.size() - 12);
    Reader tail_reader(bytes, bytes.size() - 8, bytes.size());
    const std::uint64_t stored = tail_reader.u64();
    if (fnv1a(payload) != stored) throw ChecksumMismatch("model file checksum mismatch");

    Reader r(bytes, 4, bytes.size() - 8);
    const std::uint32_t version = r.u32();
    if (version != kModelFormatVersion) {
        throw VersionMismatch("unsupported model format version " + std::to_string(version));
    }
    const std::uint32_t header_len = r.u32();
    json header = json::parse(r.str(header_len), nullptr, false);
    if (header.is_discarded() || !header.is_object()) {
        throw UnsupportedFormat("model header is not valid JSON");
    }

    ModelConfig cfg;
    try {
        const std::string enc = header.at("encoder").get<std::string>();
        try {
            cfg.encoder = parse_encoder(enc);
        } catch (const DataError&) {
            throw VersionMismatch("unknown encoder tag \"" + enc + "\"");
        }
        cfg.dim = header.at("dim").get<std::size_t>();
        cfg.hidden = header.at("hidden").get<std::size_t>();
        cfg.filter_len = header.at("filter_len").get<std::size_t>();
        cfg.vocab_size = header.at("vocab_size").get<std::size_t>();
        cfg.init_spec = header.at("init").get<std::string>();
        cfg.seed = header.at("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
        throw UnsupportedFormat("model header is missing required fields");
    }

    LoadedModel out{ModelBundle(cfg), false, {}};
    const auto params = out.model.params();
    for (Parameter* p : params) r.tensor(p->value);
    const unsigned char flag = r.raw_byte();
    if (flag == 1) {
        out.has_optimizer = true;
        out.optimizer = AdadeltaState(params);
        for (Tensor& t : out.optimizer.accum_grad) r.tensor(t);
        for (Tensor& t : out.optimizer.accum_delta) r.tensor(t);
    } else if (flag != 0) {
        throw UnsupportedFormat("unknown optimizer-state flag");
    }
    if (!r.exhausted()) throw UnsupportedFormat("trailing bytes after model payload");
    return out;
}

}  // namespace sentord
