#include "langbench/reference_nets.hpp"

namespace langbench {

// vocabulary indices: # = 0, a = 1, b = 2; outputs o# = 3, oa = 4, ob = 5
RnnGenome reference_anbn_counter() {
    RnnGenome g = empty_genome(3, OutputNormalization::normalized_relu);
    const int in_hash = 0, in_a = 1, in_b = 2;
    const int out_hash = 3, out_a = 4, out_b = 5;
    const int h = 6;  // counter: relu(h_prev + [a] - [b]) = #a - #b

    g.hidden.push_back({h, Activation::relu, Rational(0)});
    g.connections = {
        {in_a, h, Rational(1), ConnectionKind::feedforward},
        {in_b, h, Rational(-1), ConnectionKind::feedforward},
        {h, h, Rational(1), ConnectionKind::recurrent},
        // after '#': continue with a (7) or end (3), matching prior 0.3
        {in_hash, out_a, Rational(7), ConnectionKind::feedforward},
        {in_hash, out_hash, Rational(3), ConnectionKind::feedforward},
        // inside the a block: another a (7) or switch to b (3)
        {in_a, out_a, Rational(7), ConnectionKind::feedforward},
        {in_a, out_b, Rational(3), ConnectionKind::feedforward},
        // inside the b block: b while the counter is positive, else '#'
        {h, out_b, Rational(1), ConnectionKind::feedforward},
        {in_b, out_hash, Rational(1), ConnectionKind::feedforward},
        {h, out_hash, Rational(-1), ConnectionKind::feedforward},
    };
    g.validate();
    return g;
}

// vocabulary indices: # = 0, ( = 1, ) = 2; outputs o# = 3, o( = 4, o) = 5
RnnGenome reference_dyck1() {
    RnnGenome g = empty_genome(3, OutputNormalization::normalized_relu);
    const int in_open = 1, in_close = 2;
    const int out_hash = 3, out_open = 4, out_close = 5;
    const int depth = 6;     // relu(depth_prev + [open] - [close])
    const int overflow = 7;  // relu(depth - 1); depth - overflow = min(depth, 1)

    g.hidden.push_back({depth, Activation::relu, Rational(0)});
    g.hidden.push_back({overflow, Activation::relu, Rational(-1)});
    g.output_bias[static_cast<std::size_t>(out_open - 3)] = Rational(1);
    g.output_bias[static_cast<std::size_t>(out_hash - 3)] = Rational(1);
    g.connections = {
        {in_open, depth, Rational(1), ConnectionKind::feedforward},
        {in_close, depth, Rational(-1), ConnectionKind::feedforward},
        {depth, depth, Rational(1), ConnectionKind::recurrent},
        {depth, overflow, Rational(1), ConnectionKind::feedforward},
        // ')' valid iff depth > 0: pre = min(depth, 1)
        {depth, out_close, Rational(1), ConnectionKind::feedforward},
        {overflow, out_close, Rational(-1), ConnectionKind::feedforward},
        // '#' valid iff depth == 0: pre = 1 - min(depth, 1)
        {depth, out_hash, Rational(-1), ConnectionKind::feedforward},
        {overflow, out_hash, Rational(1), ConnectionKind::feedforward},
    };
    g.validate();
    return g;
}

}  // namespace langbench
