#ifndef MTSPLIT_MTSPLIT_HPP_
#define MTSPLIT_MTSPLIT_HPP_

#include "atoroidal.hpp"
#include "error.hpp"
#include "intlinalg.hpp"
#include "io.hpp"
#include "morphisms.hpp"
#include "splitting.hpp"
#include "torus.hpp"
#include "words.hpp"

#endif  // MTSPLIT_MTSPLIT_HPP_
