#pragma once

#include <stdexcept>

namespace fpa {

// Equally spaced bid grid b_i = i * eps for i in {0..K}, with b_K <= 1.
class BidGrid {
public:
    BidGrid(int positive_bids, double spacing) : k_(positive_bids), eps_(spacing) {
        if (k_ < 1) throw std::invalid_argument("BidGrid: K must be >= 1");
        if (!(eps_ > 0.0) || eps_ * k_ > 1.0 + 1e-12)
            throw std::invalid_argument("BidGrid: eps must be in (0, 1/K]");
    }

    int num_positive_bids() const noexcept { return k_; }
    int num_bids() const noexcept { return k_ + 1; }
    double spacing() const noexcept { return eps_; }

    double bid(int i) const {
        if (i < 0 || i > k_) throw std::out_of_range("BidGrid: bid index out of range");
        return i * eps_;
    }

    bool valid_index(int i) const noexcept { return i >= 0 && i <= k_; }

private:
    int k_;
    double eps_;
};

}  // namespace fpa
