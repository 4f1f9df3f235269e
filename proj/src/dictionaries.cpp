#include "helmholtz/dictionaries.hpp"

namespace helmholtz {

std::string_view to_string(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::FourierBessel: return "fourier_bessel";
    case DictionaryKind::PlaneWave: return "plane_wave";
    case DictionaryKind::AliasedPlaneWave: return "aliased_plane_wave";
    case DictionaryKind::SquareFourier: return "square_fourier";
  }
  return "unknown";
}

DictionaryKind parse_dictionary_kind(std::string_view text) {
  if (text == "fourier_bessel") return DictionaryKind::FourierBessel;
  if (text == "plane_wave") return DictionaryKind::PlaneWave;
  if (text == "aliased_plane_wave") return DictionaryKind::AliasedPlaneWave;
  if (text == "square_fourier") return DictionaryKind::SquareFourier;
  throw std::invalid_argument("unknown dictionary kind '" + std::string(text) + "'");
}

void DictionarySpec::validate() const {
  if (order < 0) throw std::invalid_argument("dictionary order must be nonnegative");
  if (!(lambda > 0.0)) throw std::invalid_argument("wavenumber lambda must be positive");
  if (kind == DictionaryKind::SquareFourier && !(square_scale > 0.0))
    throw std::invalid_argument("square_scale must be positive");
}

}  // namespace helmholtz
