#pragma once

#include "relsec/error.hpp"
#include "relsec/utf8.hpp"
#include "relsec/tokenize.hpp"
#include "relsec/encoding.hpp"
#include "relsec/dom.hpp"
#include "relsec/html_parser.hpp"
#include "relsec/context.hpp"
#include "relsec/metrics.hpp"
#include "relsec/extractor.hpp"
#include "relsec/baseline.hpp"
#include "relsec/evaluation.hpp"
#include "relsec/config.hpp"
