#pragma once

#include <vector>

#include "abc/wallet/hd.hpp"

namespace abc::channel {

using wallet::ExtendedPrivateKey;

inline constexpr std::size_t kSegmentBytes = 32;
inline constexpr std::size_t kLengthPrefixBytes = 4;

/// Whitened 32-byte segments; segment i rides on derivation index
/// base_index + i.
struct MessageSegments {
    std::vector<Hash256> segments;
    std::uint32_t base_index = 0;
};

/// SHA512(ser256(sk) || chaincode || be32(index)), first 32 bytes.
Hash256 keystream_block(const ExtendedPrivateKey& esk, std::uint32_t index);

/// be32(length) || message || zero padding to a multiple of 32.
Bytes frame_message(ByteView message);
/// Inverse of frame_message over collected frame bytes. Returns the number
/// of segments the frame occupies via `segments_used`. Throws FrameCorrupt
/// when the length prefix runs past the data.
Bytes deframe(ByteView frame, std::size_t* segments_used = nullptr);

std::size_t segment_count(std::size_t message_length);

/// Frames and whitens. Throws SegmentUnencodable when a whitened segment is
/// 0 or >= n, InvalidArgument when the message is 2^32 bytes or longer or the
/// index range would leave [0, 2^31).
MessageSegments msg_encode(const ExtendedPrivateKey& esk, ByteView message, std::uint32_t base_index);
/// Un-whitens and deframes; trailing segments beyond the frame are ignored.
Bytes msg_decode(const ExtendedPrivateKey& esk, const MessageSegments& segments, std::size_t* segments_used = nullptr);

Hash256 xor_block(const Hash256& a, const Hash256& b);

} // namespace abc::channel
