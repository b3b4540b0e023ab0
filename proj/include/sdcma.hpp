#pragma once

#include "sdcma/channel.hpp"
#include "sdcma/config.hpp"
#include "sdcma/constellation.hpp"
#include "sdcma/errors.hpp"
#include "sdcma/geometry.hpp"
#include "sdcma/harness.hpp"
#include "sdcma/link.hpp"
#include "sdcma/multiplex.hpp"
#include "sdcma/receiver.hpp"
#include "sdcma/report.hpp"
#include "sdcma/signal_space.hpp"
#include "sdcma/waveform.hpp"
