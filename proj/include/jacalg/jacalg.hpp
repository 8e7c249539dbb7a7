#pragma once

#include "jacalg/algebra.hpp"
#include "jacalg/certificate.hpp"
#include "jacalg/field.hpp"
#include "jacalg/homology.hpp"
#include "jacalg/qp.hpp"
#include "jacalg/quiver.hpp"
#include "jacalg/strings.hpp"
#include "jacalg/surface.hpp"
