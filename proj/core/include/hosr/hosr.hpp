#pragma once

#include "hosr/classify.hpp"
#include "hosr/clustering.hpp"
#include "hosr/dataset.hpp"
#include "hosr/errors.hpp"
#include "hosr/hierarchy.hpp"
#include "hosr/io.hpp"
#include "hosr/metrics.hpp"
#include "hosr/node_models.hpp"
#include "hosr/protocol.hpp"
#include "hosr/report.hpp"
