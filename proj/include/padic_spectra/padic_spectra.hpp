#ifndef PADIC_SPECTRA_PADIC_SPECTRA_HPP
#define PADIC_SPECTRA_PADIC_SPECTRA_HPP

#include "padic_spectra/errors.hpp"
#include "padic_spectra/green.hpp"
#include "padic_spectra/haar.hpp"
#include "padic_spectra/models.hpp"
#include "padic_spectra/mseries.hpp"
#include "padic_spectra/numeric.hpp"
#include "padic_spectra/operator.hpp"
#include "padic_spectra/padic.hpp"
#include "padic_spectra/roots.hpp"
#include "padic_spectra/wavelet.hpp"

#endif // PADIC_SPECTRA_PADIC_SPECTRA_HPP
