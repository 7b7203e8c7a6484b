#include "unclone/pprf.hpp"

#include <algorithm>
#include <set>

namespace unclone {

namespace {

void check_shape(int input_bits, int output_bits) {
    if (input_bits < 1 || input_bits > kPprfMaxInputBits) throw std::invalid_argument("pprf: input bits out of range");
    if (output_bits < 1) throw std::invalid_argument("pprf: output bits must be positive");
}

void check_input(std::uint64_t x, int input_bits) {
    if (input_bits < 64 && (x >> input_bits) != 0) throw std::out_of_range("pprf: input out of range");
}

std::uint64_t read_bits(const Bytes& out, int bits) {
    if (bits > 64) throw std::invalid_argument("pprf: eval_bits needs at most 64 output bits");
    std::uint64_t v = 0;
    for (int i = 0; i < bits; ++i) v = (v << 1) | static_cast<std::uint64_t>(get_bit_msb(out, i));
    return v;
}

Digest read_digest(ByteReader& r) {
    Digest d;
    auto s = r.take(d.size());
    std::copy(s.begin(), s.end(), d.begin());
    return d;
}

}  // namespace

namespace ggm {

Digest child(const Digest& seed, int bit) {
    return tagged_hash(bit ? HashTag::kRightChild : HashTag::kLeftChild, {view(seed)});
}

Digest descend(Digest seed, std::uint64_t path, int depth) {
    for (int i = depth - 1; i >= 0; --i) seed = child(seed, static_cast<int>((path >> i) & 1u));
    return seed;
}

Bytes leaf_output(const Digest& leaf, int output_bits) {
    Bytes out = expand(HashTag::kExpand, view(leaf), (static_cast<std::size_t>(output_bits) + 7) / 8);
    if (const int spare = (8 - output_bits % 8) % 8) out.back() &= static_cast<std::uint8_t>(0xFFu << spare);
    return out;
}

}  // namespace ggm

PprfKey::PprfKey(Digest root, int input_bits, int output_bits)
    : root_(root), input_bits_(input_bits), output_bits_(output_bits) {
    check_shape(input_bits, output_bits);
}

PprfKey PprfKey::generate(int input_bits, int output_bits, Rng& rng) {
    Digest root;
    Bytes b = rng.bytes(root.size());
    std::copy(b.begin(), b.end(), root.begin());
    return PprfKey(root, input_bits, output_bits);
}

Bytes PprfKey::eval(std::uint64_t x) const {
    check_input(x, input_bits_);
    return ggm::leaf_output(ggm::descend(root_, x, input_bits_), output_bits_);
}

std::uint64_t PprfKey::eval_bits(std::uint64_t x) const { return read_bits(eval(x), output_bits_); }

Bytes PprfKey::serialize() const {
    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(input_bits_));
    put_u32(out, static_cast<std::uint32_t>(output_bits_));
    put_bytes(out, view(root_));
    return out;
}

PprfKey PprfKey::deserialize(ByteView data) {
    ByteReader r(data);
    const auto in = static_cast<int>(r.u32());
    const auto out = static_cast<int>(r.u32());
    Digest root = read_digest(r);
    r.expect_done();
    return PprfKey(root, in, out);
}

PuncturedKey puncture(const PprfKey& key, std::vector<std::uint64_t> points) {
    const int n = key.input_bits();
    if (points.empty()) throw std::invalid_argument("puncture: empty set");
    if (points.size() > 64) throw std::invalid_argument("puncture: set larger than 64");
    std::sort(points.begin(), points.end());
    if (std::adjacent_find(points.begin(), points.end()) != points.end()) {
        throw std::invalid_argument("puncture: duplicate point");
    }
    for (auto x : points) check_input(x, n);

    // Every node on a punctured root-to-leaf path is withheld; the copath is
    // the set of children of withheld nodes that are not withheld themselves.
    std::set<NodeId> on_path;
    for (auto x : points) {
        for (int d = 0; d <= n; ++d) on_path.insert({d, d == 0 ? 0 : x >> (n - d)});
    }
    PuncturedKey pk;
    pk.input_bits_ = n;
    pk.output_bits_ = key.output_bits();
    pk.punctured_ = points;
    // The set is ordered by depth, so a parent's seed is known before its children.
    std::map<NodeId, Digest> path_seed;
    for (const auto& node : on_path) {
        const Digest seed = node.depth == 0 ? key.root()
                                            : ggm::child(path_seed.at({node.depth - 1, node.prefix >> 1}),
                                                         static_cast<int>(node.prefix & 1u));
        path_seed.emplace(node, seed);
        if (node.depth == n) continue;
        for (std::uint64_t b = 0; b < 2; ++b) {
            const NodeId c{node.depth + 1, (node.prefix << 1) | b};
            if (on_path.count(c)) continue;
            pk.copath_.emplace(c, ggm::child(seed, static_cast<int>(b)));
        }
    }
    return pk;
}

Bytes PuncturedKey::eval(std::uint64_t x) const {
    check_input(x, input_bits_);
    for (int d = 1; d <= input_bits_; ++d) {
        const std::uint64_t prefix = x >> (input_bits_ - d);
        auto it = copath_.find({d, prefix});
        if (it == copath_.end()) continue;
        const int rest = input_bits_ - d;
        const std::uint64_t tail = rest == 0 ? 0 : x & ((std::uint64_t{1} << rest) - 1);
        return ggm::leaf_output(ggm::descend(it->second, tail, rest), output_bits_);
    }
    throw PuncturedPointError("pprf: evaluation at a punctured point");
}

std::uint64_t PuncturedKey::eval_bits(std::uint64_t x) const { return read_bits(eval(x), output_bits_); }

Bytes PuncturedKey::serialize() const {
    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(input_bits_));
    put_u32(out, static_cast<std::uint32_t>(output_bits_));
    put_u32(out, static_cast<std::uint32_t>(punctured_.size()));
    for (auto x : punctured_) put_u64(out, x);
    put_u32(out, static_cast<std::uint32_t>(copath_.size()));
    for (const auto& [node, seed] : copath_) {
        put_u32(out, static_cast<std::uint32_t>(node.depth));
        put_u64(out, node.prefix);
        put_bytes(out, view(seed));
    }
    return out;
}

PuncturedKey PuncturedKey::deserialize(ByteView data) {
    ByteReader r(data);
    PuncturedKey pk;
    pk.input_bits_ = static_cast<int>(r.u32());
    pk.output_bits_ = static_cast<int>(r.u32());
    check_shape(pk.input_bits_, pk.output_bits_);
    const auto count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) pk.punctured_.push_back(r.u64());
    const auto nodes = r.u32();
    for (std::uint32_t i = 0; i < nodes; ++i) {
        NodeId id{static_cast<int>(r.u32()), 0};
        id.prefix = r.u64();
        if (id.depth < 1 || id.depth > pk.input_bits_) throw ParseError("punctured key: node depth out of range");
        pk.copath_.emplace(id, read_digest(r));
    }
    r.expect_done();
    return pk;
}

}  // namespace unclone
