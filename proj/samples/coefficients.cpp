// Prints a few Fourier coefficients of E_{k,S} for the Gram matrices in samples/grams.
//   sample_coefficients [gram-file k]
#include <iostream>
#include <string>

#include "orthocoeff/orthocoeff.hpp"

using namespace orthocoeff;

int main(int argc, char** argv) {
  std::string path = argc > 1 ? argv[1] : std::string(ORTHOCOEFF_SAMPLES) + "/grams/a1.gram";
  int k = argc > 2 ? std::stoi(argv[2]) : 4;
  try {
    EvenLattice lat = load_gram(path);
    check_weight(lat, k);
    std::cout << "S =\n" << lat.gram() << "k = " << k << ", det = " << lat.det()
              << (is_maximal(lat) ? ", maximal\n" : ", not maximal\n");
    for (const auto& x : cone_vectors(lat, Rational(2), true)) {
      CoefficientRecord r = coefficient(lat, x, k);
      std::cout << x.str() << "  Q0=" << to_string(x.q0()) << "  ";
      if (r.value_exact)
        std::cout << to_string(*r.value_exact);
      else
        std::cout << r.value_float << " +- " << r.diagnostics.tail_bound;
      std::cout << "  [" << to_string(r.path) << "]\n";
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
