#pragma once

#include <filesystem>

#include "json.hpp"

#include "abc/wallet/hd.hpp"

namespace abc::channel {

enum class Role { sender, receiver };

std::string_view role_name(Role r);
Role parse_role(std::string_view name);

struct SessionState {
    Role role = Role::sender;
    wallet::ExtendedPrivateKey esk_ab;
    std::uint32_t index_last = 0;
    crypto::Point peer_pk;
    wallet::Network network = wallet::Network::testnet;
    std::string wallet_ref;

    /// index_last only moves forward.
    void advance_to(std::uint32_t index);

    nlohmann::json to_json() const;
    static SessionState from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static SessionState load(const std::filesystem::path& path);
};

} // namespace abc::channel
