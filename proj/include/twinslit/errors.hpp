#pragma once

#include <stdexcept>
#include <string>

namespace twinslit {

// Thrown when an adaptive integral cannot reach the requested accuracy.
struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

// |psi| fell below the singularity floor: the guidance field is undefined here.
struct NodeSingularity : std::runtime_error {
    NodeSingularity(double psi_abs, double scale)
        : std::runtime_error("wavefunction node: |psi|=" + std::to_string(psi_abs) +
                             " below floor relative to local scale " + std::to_string(scale)),
          psi_abs(psi_abs), scale(scale) {}
    double psi_abs;
    double scale;
};

// The finite-difference phase oracle met a branch jump it refuses to guess across.
struct PhaseUnwrapFailure : std::runtime_error {
    explicit PhaseUnwrapFailure(double jump)
        : std::runtime_error("phase jump " + std::to_string(jump) + " exceeds pi/2 across stencil"),
          jump(jump) {}
    double jump;
};

struct StepLimitExceeded : std::runtime_error {
    explicit StepLimitExceeded(long steps)
        : std::runtime_error("integrator exceeded " + std::to_string(steps) + " steps") {}
};

// A trajectory ran into a node and had to be abandoned.
struct NodeEncounter : std::runtime_error {
    NodeEncounter(double t, double y1, double y2)
        : std::runtime_error("trajectory hit a node near t=" + std::to_string(t)),
          t(t), y1(y1), y2(y2) {}
    double t, y1, y2;
};

struct RejectionOverflow : std::runtime_error {
    RejectionOverflow(long long rejects, double acceptance)
        : std::runtime_error("rejection sampler exceeded " + std::to_string(rejects) +
                             " proposals (running acceptance rate " + std::to_string(acceptance) + ")"),
          rejects(rejects), acceptance(acceptance) {}
    long long rejects;
    double acceptance;
};

// Target density exceeded its rejection envelope; the envelope margin is wrong.
struct EnvelopeViolation : std::runtime_error {
    explicit EnvelopeViolation(double excess)
        : std::runtime_error("proposal envelope violated by factor " + std::to_string(excess)) {}
};

struct NoFringesDetected : std::runtime_error {
    NoFringesDetected() : std::runtime_error("fewer than two interference maxima above the prominence floor") {}
};

struct ConfigParseError : std::runtime_error {
    ConfigParseError(int line, const std::string& key, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line) + " [" + key + "]: " + what),
          line(line), key(key) {}
    int line;
    std::string key;
};

}  // namespace twinslit
