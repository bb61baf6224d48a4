#include "abc/channel/message.hpp"

#include <algorithm>

#include "abc/crypto/hash.hpp"

namespace abc::channel {

Hash256 keystream_block(const ExtendedPrivateKey& esk, std::uint32_t index)
{
    Bytes data;
    data.reserve(68);
    append(data, esk.sk.to_bytes());
    append(data, esk.chaincode);
    put_be32(data, index);
    const crypto::Hash512 h = crypto::sha512(data);
    Hash256 out;
    std::copy(h.begin(), h.begin() + 32, out.begin());
    return out;
}

Hash256 xor_block(const Hash256& a, const Hash256& b)
{
    Hash256 out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

std::size_t segment_count(std::size_t message_length)
{
    return (kLengthPrefixBytes + message_length + kSegmentBytes - 1) / kSegmentBytes;
}

Bytes frame_message(ByteView message)
{
    if (message.size() > 0xffffffffull) throw Error(Errc::InvalidArgument, "message must be shorter than 2^32 bytes");
    Bytes frame;
    frame.reserve(segment_count(message.size()) * kSegmentBytes);
    put_be32(frame, static_cast<std::uint32_t>(message.size()));
    append(frame, message);
    frame.resize(segment_count(message.size()) * kSegmentBytes, 0);
    return frame;
}

Bytes deframe(ByteView frame, std::size_t* segments_used)
{
    if (frame.size() < kLengthPrefixBytes) throw Error(Errc::FrameCorrupt, "no length prefix");
    Reader rd(frame);
    const std::uint32_t length = rd.be32();
    if (length > rd.remaining()) {
        throw Error(Errc::FrameCorrupt, "length prefix " + std::to_string(length) + " exceeds " +
                                            std::to_string(rd.remaining()) + " collected bytes");
    }
    ByteView body = rd.take(length);
    if (segments_used) *segments_used = segment_count(length);
    return Bytes(body.begin(), body.end());
}

MessageSegments msg_encode(const ExtendedPrivateKey& esk, ByteView message, std::uint32_t base_index)
{
    const Bytes frame = frame_message(message);
    const std::size_t count = frame.size() / kSegmentBytes;
    if (static_cast<std::uint64_t>(base_index) + count > wallet::DerivationIndex::kHardenedBit) {
        throw Error(Errc::InvalidArgument, "message would run past derivation index 2^31 - 1");
    }
    const mpz_class& n = crypto::Curve::secp256k1().order();
    MessageSegments out;
    out.base_index = base_index;
    out.segments.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Hash256 block;
        std::copy_n(frame.begin() + static_cast<std::ptrdiff_t>(i * kSegmentBytes), kSegmentBytes, block.begin());
        const std::uint32_t index = base_index + static_cast<std::uint32_t>(i);
        Hash256 seg = xor_block(block, keystream_block(esk, index));
        const mpz_class v = crypto::mpz_from_bytes(seg);
        if (v == 0 || v >= n) {
            throw Error(Errc::SegmentUnencodable, "whitened segment at index " + std::to_string(index) + " is not in [1, n)");
        }
        out.segments.push_back(seg);
    }
    return out;
}

Bytes msg_decode(const ExtendedPrivateKey& esk, const MessageSegments& segments, std::size_t* segments_used)
{
    Bytes frame;
    frame.reserve(segments.segments.size() * kSegmentBytes);
    for (std::size_t i = 0; i < segments.segments.size(); ++i) {
        append(frame, xor_block(segments.segments[i],
                                keystream_block(esk, segments.base_index + static_cast<std::uint32_t>(i))));
    }
    return deframe(frame, segments_used);
}

} // namespace abc::channel
