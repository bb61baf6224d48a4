#include "abc/channel/session.hpp"

#include <fstream>

namespace abc::channel {

std::string_view role_name(Role r) { return r == Role::sender ? "sender" : "receiver"; }

Role parse_role(std::string_view name)
{
    if (name == "sender") return Role::sender;
    if (name == "receiver") return Role::receiver;
    throw Error(Errc::SchemaError, "role must be sender or receiver");
}

void SessionState::advance_to(std::uint32_t index)
{
    if (index < index_last) throw Error(Errc::InvalidArgument, "session index cannot move backwards");
    index_last = index;
}

nlohmann::json SessionState::to_json() const
{
    const auto& curve = crypto::Curve::secp256k1();
    return {{"role", role_name(role)},
            {"wallet", wallet_ref},
            {"index_last", index_last},
            {"peer_pk", to_hex(curve.encode(peer_pk))},
            {"network", wallet::network_name(network)},
            {"esk", {{"sk", esk_ab.sk.to_hex()}, {"chaincode", to_hex(esk_ab.chaincode)}}}};
}

SessionState SessionState::from_json(const nlohmann::json& j)
{
    try {
        SessionState s;
        s.role = parse_role(j.at("role").get<std::string>());
        s.wallet_ref = j.value("wallet", "");
        s.index_last = j.at("index_last").get<std::uint32_t>();
        s.peer_pk = crypto::Curve::secp256k1().decode(from_hex(j.at("peer_pk").get<std::string>()));
        s.network = wallet::parse_network(j.at("network").get<std::string>());
        s.esk_ab.sk = crypto::Scalar::from_bytes(from_hex(j.at("esk").at("sk").get<std::string>()));
        s.esk_ab.chaincode = array_from_hex<32>(j.at("esk").at("chaincode").get<std::string>());
        if (!crypto::Curve::secp256k1().valid_secret(s.esk_ab.sk)) throw Error(Errc::SchemaError, "session key out of range");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("session file: ") + e.what());
    }
}

void SessionState::save(const std::filesystem::path& path) const
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
        out << to_json().dump(2) << '\n';
        if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

SessionState SessionState::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SchemaError, std::string("session file: ") + e.what());
    }
}

} // namespace abc::channel
