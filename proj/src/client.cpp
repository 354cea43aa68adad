#include "vfc/protocol.hpp"

namespace vfc {

namespace {

Frame roundtrip(FrameTransport& channel, const Frame& frame) {
  Frame response = channel.request(frame);
  if (response.msg_type == MsgType::error) {
    const auto e = ErrorMsg::from_frame(response);
    throw RemoteError(e.code, e.message);
  }
  return response;
}

void merge_report(VerificationReport& total, const VerificationReport& part) {
  total.residuals_exact.insert(total.residuals_exact.end(),
                               part.residuals_exact.begin(),
                               part.residuals_exact.end());
  total.residuals_approx.insert(total.residuals_approx.end(),
                                part.residuals_approx.begin(),
                                part.residuals_approx.end());
  total.mismatch_count += part.mismatch_count;
  total.ops += part.ops;
  total.tolerance_used = std::max(total.tolerance_used, part.tolerance_used);
}

}  // namespace

ClientResult client_execute(const TaskSpec& task, FrameTransport& channel,
                            const BackendRegistry& registry) {
  task.params.validate();
  HeBackend& backend = registry.get(task.backend_id);
  if (backend.descriptor().mode != task.params.mode)
    throw ModeMismatchError("backend mode does not match params mode");
  if (task.a.mode() != task.params.mode)
    throw ModeMismatchError("operand A mode does not match params mode");
  if (task.mode == TaskMode::dual &&
      task.b_ownership != BOwnership::client_secret)
    throw ModeMismatchError("dual-sided hashing requires a client-secret B");
  if (task.b_ownership == BOwnership::server_resident) {
    if (task.b_handle.empty())
      throw ConfigError("server-resident B requires a handle name");
  } else if (!task.b.has_value()) {
    throw ConfigError("operand B missing");
  }

  // Square A would let an adversary who ever learned it invert out the hash;
  // ship non-square blocks instead.
  const NormalizedBlocks norm = normalize_square(task.a, task.square_strategy);

  const auto init = InitAckMsg::from_frame(roundtrip(
      channel, SessionInitMsg{task.backend_id, task.params}.to_frame()));
  const std::uint32_t session = init.session_id;

  // Dual mode: column-hash B before encrypting it.
  HashVector hb;
  std::string b_name = task.b_handle;
  if (task.b_ownership != BOwnership::server_resident) {
    b_name = "B";
    UploadOperandMsg up;
    up.session_id = session;
    up.name = b_name;
    if (task.b_ownership == BOwnership::public_plain) {
      up.plaintext = true;
      up.blob = encode_matrix(*task.b);
    } else {
      Matrix payload = *task.b;
      if (task.mode == TaskMode::dual) {
        hb = gen_hash_vector(task.b->cols(), task.hash_mode, task.params,
                             task.hash_seed + 0x10000, task.nonzero_hash);
        const Matrix col =
            transposed(compute_checksum(transposed(*task.b), hb, task.params));
        payload = attach_checksum_cols(*task.b, col).stacked();
      }
      up.blob = serialize_cipher(backend.encrypt(payload, task.params, task.key));
    }
    OperandAckMsg::from_frame(roundtrip(channel, up.to_frame()));
  }

  std::optional<ErrorConfig> err;
  if (task.mode == TaskMode::with_error)
    err = ErrorConfig::generate(task.a.cols(), task.error_r, task.params,
                                task.error_seed);

  const Index proof_cols = task.mode == TaskMode::dual ? 1 : 0;
  std::vector<Matrix> block_results;
  VerificationReport report;
  report.mode = static_cast<VerifyMode>(task.mode);
  report.verdict = Verdict::pass;

  for (std::size_t i = 0; i < norm.blocks.size(); ++i) {
    const Matrix& a_block = norm.blocks[i];
    const HashVector h =
        gen_hash_vector(a_block.rows(), task.hash_mode, task.params,
                        task.hash_seed + i, task.nonzero_hash);
    const Matrix checksum =
        task.mode == TaskMode::with_error
            ? compute_checksum_with_error(a_block, h, *err, task.params)
            : compute_checksum(a_block, h, task.params);
    const CheckedMatrix cm =
        attach_checksum(a_block, checksum,
                        task.mode == TaskMode::with_error
                            ? ChecksumKind::with_error
                            : ChecksumKind::plain,
                        static_cast<std::uint32_t>(i));

    UploadOperandMsg up;
    up.session_id = session;
    up.name = "A" + std::to_string(i);
    up.blob =
        serialize_cipher(backend.encrypt(cm.stacked(), task.params, task.key));
    OperandAckMsg::from_frame(roundtrip(channel, up.to_frame()));

    ComputeRequestMsg req;
    req.session_id = session;
    req.lhs = up.name;
    req.rhs = b_name;
    const auto result_msg =
        ResultMsg::from_frame(roundtrip(channel, req.to_frame()));
    const Matrix stacked =
        backend.decrypt(deserialize_cipher(result_msg.blob), task.key);
    if (stacked.rows() != cm.stacked().rows())
      throw ProtocolError("result row count disagrees with request", 0);

    const ResultBundle bundle =
        split_result(stacked, cm.checksum_row_count(), proof_cols);
    VerificationReport part;
    switch (task.mode) {
      case TaskMode::plain:
        part = verify(bundle, h, task.params);
        break;
      case TaskMode::with_error:
        part = verify_with_error(bundle, h, *err, task.params);
        break;
      case TaskMode::dual:
        part = verify_dual(bundle, h, hb, task.params);
        break;
    }
    if (part.verdict == Verdict::fail) report.verdict = Verdict::fail;
    merge_report(report, part);
    block_results.push_back(bundle.result);
  }

  return {recombine(norm, block_results), report};
}

}  // namespace vfc
