#pragma once

#include <vector>

#include "gcell/spec.hpp"

namespace gcell {

// Mixed-radix label digits x_k..x_0, most significant first.
using ServerLabel = std::vector<i64>;

inline void check_uid(i64 uid, const LevelSizes& sizes) {
  if (uid < 0 || uid >= sizes.servers())
    throw UidOutOfRange("uid " + std::to_string(uid) + " outside [0, " +
                        std::to_string(sizes.servers()) + ")");
}

inline i64 uid_from_label(const ServerLabel& label, const LevelSizes& sizes) {
  int k = sizes.k();
  if (static_cast<int>(label.size()) != k + 1)
    throw DigitOutOfRange("label has " + std::to_string(label.size()) +
                          " digits, expected " + std::to_string(k + 1));
  i64 uid = 0;
  for (int i = k; i >= 0; --i) {
    i64 digit = label[static_cast<size_t>(k - i)];
    i64 radix = (i == 0) ? sizes.t_at(0) : sizes.g_at(i);
    if (digit < 0 || digit >= radix)
      throw DigitOutOfRange("digit x_" + std::to_string(i) + "=" + std::to_string(digit) +
                            " outside [0, " + std::to_string(radix) + ")");
    uid += (i == 0) ? digit : digit * sizes.t_at(i - 1);
  }
  return uid;
}

inline ServerLabel label_from_uid(i64 uid, const LevelSizes& sizes) {
  check_uid(uid, sizes);
  int k = sizes.k();
  ServerLabel label(static_cast<size_t>(k + 1));
  for (int i = k; i >= 1; --i) {
    label[static_cast<size_t>(k - i)] = uid / sizes.t_at(i - 1);
    uid %= sizes.t_at(i - 1);
  }
  label[static_cast<size_t>(k)] = uid;
  return label;
}

// Digit x_level of a uid; level 0 is the in-switch position.
inline i64 digit_at(i64 uid, int level, const LevelSizes& sizes) {
  if (level == 0) return uid % sizes.t_at(0);
  return (uid / sizes.t_at(level - 1)) % sizes.g_at(level);
}

}  // namespace gcell
