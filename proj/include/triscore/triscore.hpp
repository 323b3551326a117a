#pragma once
// Convenience include for the whole library.

#include "triscore/fact.hpp"
#include "triscore/graph_cross.hpp"
#include "triscore/io.hpp"
#include "triscore/pipeline.hpp"
#include "triscore/rdf.hpp"
#include "triscore/skipgram.hpp"
#include "triscore/starpath.hpp"
#include "triscore/super_classifier.hpp"
#include "triscore/text.hpp"
