#pragma once

// Bytecode acquisition over Ethereum JSON-RPC: eth_getCode at the latest
// block. Transport and protocol failures surface as RpcError; an address
// that resolves to empty code (self-destructed or never a contract) is the
// distinct NoCode outcome so batch bookkeeping can count it separately.

#include "storlift/errors.hpp"
#include "storlift/word.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace storlift {

struct NoCode : std::runtime_error {
  explicit NoCode(const std::string& address)
      : std::runtime_error("no code at " + address) {}
};

inline bool valid_address(std::string_view a) {
  if (a.size() != 42 || a[0] != '0' || (a[1] != 'x' && a[1] != 'X'))
    return false;
  for (char c : a.substr(2))
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
          (c >= 'A' && c <= 'F')))
      return false;
  return true;
}

namespace detail {

// "http://host:port/some/path" -> {"http://host:port", "/some/path"}
inline std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme = url.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace detail

inline std::vector<std::uint8_t> fetch_code(const std::string& address,
                                            const std::string& rpc_url) {
  if (!valid_address(address))
    throw std::invalid_argument("malformed address: " + address);
  if (rpc_url.empty()) throw RpcError("no rpc endpoint configured");

  auto [base, path] = detail::split_url(rpc_url);
  httplib::Client client(base);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(30, 0);

  nlohmann::json request = {{"jsonrpc", "2.0"},
                            {"id", 1},
                            {"method", "eth_getCode"},
                            {"params", {address, "latest"}}};
  auto res = client.Post(path, request.dump(), "application/json");
  if (!res)
    throw RpcError("rpc transport failure (" + httplib::to_string(res.error()) +
                   ") for " + rpc_url);
  if (res->status != 200)
    throw RpcError("rpc http status " + std::to_string(res->status) + " from " +
                   rpc_url);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw RpcError(std::string("rpc response is not JSON: ") + e.what());
  }
  if (doc.contains("error"))
    throw RpcError("rpc error: " + doc["error"].dump());
  if (!doc.contains("result") || !doc["result"].is_string())
    throw RpcError("rpc response has no result string");

  auto bytes = parse_hex_bytes(doc["result"].get<std::string>());
  if (!bytes) throw RpcError("rpc result is not hex bytecode");
  if (bytes->empty()) throw NoCode(address);
  return *bytes;
}

}  // namespace storlift
