#define OPENSSL_SUPPRESS_DEPRECATED
#include "abc/crypto/hash.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/ripemd.h>
#include <openssl/sha.h>

namespace abc::crypto {

Hash256 sha256(ByteView data)
{
    Hash256 out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Hash512 sha512(ByteView data)
{
    Hash512 out;
    SHA512(data.data(), data.size(), out.data());
    return out;
}

Hash512 hmac_sha512(ByteView key, ByteView data)
{
    Hash512 out;
    unsigned int len = 0;
    if (!HMAC(EVP_sha512(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len) ||
        len != out.size()) {
        throw Error(Errc::InvalidArgument, "HMAC-SHA512 failed");
    }
    return out;
}

// OpenSSL 3.0.x only exposes RIPEMD160 through the legacy provider; the
// low-level entry point works without it.
Hash160 ripemd160(ByteView data)
{
    Hash160 out;
    RIPEMD160(data.data(), data.size(), out.data());
    return out;
}

Hash160 hash160(ByteView data)
{
    Hash256 inner = sha256(data);
    return ripemd160(inner);
}

Hash256 double_sha256(ByteView data)
{
    Hash256 inner = sha256(data);
    return sha256(inner);
}

} // namespace abc::crypto
