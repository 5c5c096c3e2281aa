#pragma once

// Umbrella header.
#include "krein/bkfact.hpp"
#include "krein/decomp.hpp"
#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/genrand.hpp"
#include "krein/hermdex.hpp"
#include "krein/matrix.hpp"
#include "krein/phillips.hpp"
#include "krein/space.hpp"
