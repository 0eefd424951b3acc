#pragma once

// Umbrella header for the whole library.

#include "ccgnli/arith.hpp"
#include "ccgnli/category.hpp"
#include "ccgnli/cky.hpp"
#include "ccgnli/compose.hpp"
#include "ccgnli/congruence.hpp"
#include "ccgnli/derivation.hpp"
#include "ccgnli/fuse.hpp"
#include "ccgnli/lexicon.hpp"
#include "ccgnli/lexknow.hpp"
#include "ccgnli/pipeline.hpp"
#include "ccgnli/problems.hpp"
#include "ccgnli/prover.hpp"
#include "ccgnli/rational.hpp"
#include "ccgnli/rewrite.hpp"
#include "ccgnli/semtype.hpp"
#include "ccgnli/tagset.hpp"
#include "ccgnli/templates.hpp"
#include "ccgnli/term.hpp"
#include "ccgnli/term_text.hpp"
#include "ccgnli/tptp.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {}
