#include "vfc/protocol.hpp"

namespace vfc {

namespace {

constexpr std::size_t kMaxOperandBytes = 64u << 20;

Frame error_frame(ErrorCode code, const std::string& message) {
  ErrorMsg m;
  m.code = static_cast<std::uint16_t>(code);
  m.message = message;
  return m.to_frame();
}

}  // namespace

ServerCore::ServerCore(BackendRegistry registry) : registry_(std::move(registry)) {}

void ServerCore::preload(const std::string& name, Matrix m) {
  std::lock_guard lock(mutex_);
  resident_.insert_or_assign(name, std::move(m));
}

OpCounters ServerCore::backend_counters(std::uint8_t backend_id) const {
  return registry_.get(backend_id).counters();
}

Frame ServerCore::handle(const Frame& request) {
  std::lock_guard lock(mutex_);
  try {
    return handle_locked(request);
  } catch (const ProtocolError& e) {
    return error_frame(ErrorCode::bad_request, e.what());
  } catch (const InvalidDimensionError& e) {
    return error_frame(ErrorCode::dimension_mismatch, e.what());
  } catch (const Error& e) {
    return error_frame(ErrorCode::backend_failure, e.what());
  }
}

Frame ServerCore::handle_locked(const Frame& request) {
  switch (request.msg_type) {
    case MsgType::ping:
      return Frame{MsgType::ping, {}};

    case MsgType::session_init: {
      const auto msg = SessionInitMsg::from_frame(request);
      if (!registry_.has(msg.backend_id))
        return error_frame(ErrorCode::backend_failure, "unknown backend id");
      const std::uint32_t id = next_session_++;
      sessions_[id] = Session{msg.backend_id, msg.params, {}};
      InitAckMsg ack;
      ack.session_id = id;
      ack.backend_id = msg.backend_id;
      ack.params = msg.params;
      return ack.to_frame();
    }

    case MsgType::upload_operand: {
      const auto msg = UploadOperandMsg::from_frame(request);
      const auto it = sessions_.find(msg.session_id);
      if (it == sessions_.end())
        return error_frame(ErrorCode::unknown_session, "unknown session id");
      if (msg.blob.size() > kMaxOperandBytes)
        return error_frame(ErrorCode::oversize_payload, "operand too large");
      Stored stored;
      stored.plaintext = msg.plaintext;
      if (msg.plaintext)
        stored.plain = decode_matrix(msg.blob);
      else
        stored.ct = deserialize_cipher(msg.blob);
      it->second.operands.insert_or_assign(msg.name, std::move(stored));
      OperandAckMsg ack;
      ack.session_id = msg.session_id;
      ack.name = msg.name;
      return ack.to_frame();
    }

    case MsgType::compute_request: {
      const auto msg = ComputeRequestMsg::from_frame(request);
      const auto it = sessions_.find(msg.session_id);
      if (it == sessions_.end())
        return error_frame(ErrorCode::unknown_session, "unknown session id");
      if (msg.op != kOpMatmul)
        return error_frame(ErrorCode::bad_request, "unknown operation");
      Session& session = it->second;

      const auto lhs_it = session.operands.find(msg.lhs);
      if (lhs_it == session.operands.end() || lhs_it->second.plaintext)
        return error_frame(ErrorCode::unknown_operand,
                           "lhs is not an uploaded ciphertext: " + msg.lhs);
      HeBackend& backend = registry_.get(session.backend_id);

      CipherMatrix product;
      const auto rhs_it = session.operands.find(msg.rhs);
      if (rhs_it != session.operands.end()) {
        const Stored& rhs = rhs_it->second;
        product = rhs.plaintext ? backend.matmul(lhs_it->second.ct, rhs.plain)
                                : backend.matmul(lhs_it->second.ct, rhs.ct);
      } else {
        const auto res_it = resident_.find(msg.rhs);
        if (res_it == resident_.end())
          return error_frame(ErrorCode::unknown_operand,
                             "unknown operand: " + msg.rhs);
        product = backend.matmul(lhs_it->second.ct, res_it->second);
      }
      ResultMsg result;
      result.session_id = msg.session_id;
      result.blob = serialize_cipher(product);
      return result.to_frame();
    }

    case MsgType::init_ack:
    case MsgType::operand_ack:
    case MsgType::result:
    case MsgType::error:
      return error_frame(ErrorCode::bad_request,
                         "client-bound message sent to server");

    default:
      return error_frame(ErrorCode::bad_request, "unhandled message type");
  }
}

}  // namespace vfc
