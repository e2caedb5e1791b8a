#pragma once

namespace dgrid {

// Idempotent libsodium initialisation; call before any sodium primitive.
void ensure_sodium();

}  // namespace dgrid
