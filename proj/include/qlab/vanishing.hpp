#pragma once

#include <optional>
#include <utility>

#include "qlab/errors.hpp"

namespace qlab {

/// Single-use key material. `take()` hands the value out once and wipes the
/// holder; every access afterwards throws LifecycleError.
template <typename T>
class Vanishing {
public:
    Vanishing() = default;
    explicit Vanishing(T value) : value_(std::move(value)) {}

    Vanishing(const Vanishing&) = delete;
    Vanishing& operator=(const Vanishing&) = delete;
    Vanishing(Vanishing&& other) noexcept : value_(std::exchange(other.value_, std::nullopt)) {}
    Vanishing& operator=(Vanishing&& other) noexcept {
        if (this != &other) {
            wipe();
            value_ = std::exchange(other.value_, std::nullopt);
        }
        return *this;
    }
    ~Vanishing() { wipe(); }

    bool vanished() const noexcept { return !value_.has_value(); }

    T take() {
        if (!value_) throw LifecycleError("key material already vanished");
        T out = std::move(*value_);
        wipe();
        return out;
    }

    void vanish() noexcept { wipe(); }

private:
    void wipe() noexcept {
        if (value_) {
            *value_ = T{};
            value_.reset();
        }
    }

    std::optional<T> value_;
};

}  // namespace qlab
