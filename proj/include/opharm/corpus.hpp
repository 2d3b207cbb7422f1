#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opharm/field.hpp"
#include "opharm/quantum.hpp"

namespace opharm {

struct CorpusSpec {
  std::uint64_t seed = 1;
  int d = 1;
  int N = 32;
  int n = 2;
  int bandM = 6;       // coefficients on ||m||_inf <= bandM
  int size = 50;       // includes the two exemplars when size >= 3
  bool zero_mean = true;
  bool hermitian = false;
  double scale = 1.0;  // every field is multiplied by this
  bool adjoint = false;
};

struct CorpusItem {
  int id = 0;
  std::string label;  // "lacunary", "single_mode" or "gaussian"
  OperatorField field;
};

/// Throws ConfigError on an invalid spec.
void validate(const CorpusSpec& spec);

/// Items 0 and 1 are the lacunary sum_{2^j <= bandM} e^{2 pi i 2^j s_1} I and the
/// single mode e^{2 pi i s_1} I (cosines when hermitian); the rest carry
/// i.i.d. complex Gaussian blocks, E|entry|^2 = 1, on the band. Item k draws
/// from its own stream, so the corpus does not depend on thread count.
std::vector<CorpusItem> gen_corpus(const CorpusSpec& spec);

/// Fourier coefficients of a scalar d = 2 field above rel_tol * max |coeff|,
/// as a quantum torus element.
QTElement element_from_field(const OperatorField& f, const Theta& theta, double rel_tol = 1e-12);

}  // namespace opharm
