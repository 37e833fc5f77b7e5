#include "spectrade/identity.hpp"

#include "spectrade/canonical.hpp"
#include "spectrade/errors.hpp"

namespace spectrade {

void IdentityRegistry::register_identity(const std::string& name) {
    if (secrets_.count(name)) return;
    CanonicalWriter w;
    w.str("spectrade.identity.v1");
    w.str(name);
    secrets_[name] = w.hash();
}

bool IdentityRegistry::has(const std::string& name) const {
    return secrets_.count(name) > 0;
}

const Digest& IdentityRegistry::secret(const std::string& name) const {
    auto it = secrets_.find(name);
    if (it == secrets_.end()) {
        throw LookupError("IdentityRegistry: unknown identity " + name);
    }
    return it->second;
}

Digest IdentityRegistry::sign(const std::string& name,
                              std::span<const std::uint8_t> message) const {
    return keyed_digest(secret(name), message);
}

bool IdentityRegistry::verify(const std::string& name, std::span<const std::uint8_t> message,
                              const Digest& signature) const {
    return keyed_digest(secret(name), message) == signature;
}

} // namespace spectrade
