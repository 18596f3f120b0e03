// Copyright 2026 The qheat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qheat/error.hpp"

#include <iostream>
#include <mutex>

namespace qheat {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::RegimeMismatch: return "regime mismatch";
        case ErrorCode::DegenerateSteadyState: return "degenerate steady state";
        case ErrorCode::NotDegenerate: return "not degenerate";
        case ErrorCode::NullspaceDimension: return "nullspace dimension";
        case ErrorCode::UnreachableTarget: return "unreachable target";
        case ErrorCode::StepSizeUnderflow: return "step size underflow";
        case ErrorCode::InvariantViolation: return "invariant violation";
        case ErrorCode::Config: return "config";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot() {
    static WarningHandler h = [](const std::string& msg) {
        std::cerr << "qheat: warning: " << msg << '\n';
    };
    return h;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex());
    handler_slot() = std::move(handler);
}

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex());
    if (handler_slot()) handler_slot()(message);
}

}  // namespace qheat
