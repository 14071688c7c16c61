#pragma once

#include "honeygraph/attributes.hpp"
#include "honeygraph/checkpoint.hpp"
#include "honeygraph/dagrnn.hpp"
#include "honeygraph/dataset.hpp"
#include "honeygraph/error.hpp"
#include "honeygraph/evaluation.hpp"
#include "honeygraph/extend.hpp"
#include "honeygraph/graph.hpp"
#include "honeygraph/graph_io.hpp"
#include "honeygraph/ldif.hpp"
#include "honeygraph/loss.hpp"
#include "honeygraph/model.hpp"
#include "honeygraph/provisioning.hpp"
#include "honeygraph/random.hpp"
#include "honeygraph/sharphound.hpp"
#include "honeygraph/suite.hpp"
#include "honeygraph/tensors.hpp"
#include "honeygraph/trainer.hpp"
