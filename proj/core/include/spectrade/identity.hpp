#pragma once

#include <map>
#include <span>
#include <string>

#include "spectrade/hash.hpp"

namespace spectrade {

// Trusted-setup identity material. Signatures and watermarks in this
// simulation are keyed digests: sign(name, m) = H(secret(name) || m).
// Secrets derive deterministically from the identity name so a chain dump can
// be re-verified offline; real key management is out of scope here.
class IdentityRegistry {
public:
    void register_identity(const std::string& name);
    bool has(const std::string& name) const;

    Digest sign(const std::string& name, std::span<const std::uint8_t> message) const;
    bool verify(const std::string& name, std::span<const std::uint8_t> message,
                const Digest& signature) const;

private:
    const Digest& secret(const std::string& name) const;

    std::map<std::string, Digest> secrets_;
};

} // namespace spectrade
