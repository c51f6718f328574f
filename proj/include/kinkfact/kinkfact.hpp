#pragma once

#include "kinkfact/errors.hpp"
#include "kinkfact/factorizer.hpp"
#include "kinkfact/figures.hpp"
#include "kinkfact/io.hpp"
#include "kinkfact/kinks.hpp"
#include "kinkfact/pipeline.hpp"
#include "kinkfact/powerpoly.hpp"
#include "kinkfact/presets.hpp"
#include "kinkfact/susy.hpp"
#include "kinkfact/verify.hpp"
