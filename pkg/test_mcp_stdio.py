#!/usr/bin/env python3
"""
Test esmin MCP Server via stdio transport (Standard MCP)

This script drives the esmin MCP server over the standard stdio transport with
raw JSON-RPC lines, the way an MCP client would.
"""

import json
import subprocess
import sys
import time
import os
from typing import Dict, Any


class EsminMCPStdioTester:
    """Test esmin MCP server via stdio transport."""

    def __init__(self):
        self.proc = None
        self.next_id = 1

    def start_server(self):
        """Start the MCP server in stdio mode."""
        print("🚀 Starting esmin MCP server in stdio mode...")

        env = os.environ.copy()
        env['ESMIN_LOG_LEVEL'] = 'INFO'

        self.proc = subprocess.Popen(
            [sys.executable, '-m', 'esmin.app'],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            bufsize=1,
            env=env
        )

        # Give server time to start
        time.sleep(1.0)
        print("✅ Server started")

    def send_request(self, method: str, params: Dict[str, Any]) -> Dict[str, Any]:
        """Send a JSON-RPC request and get response."""
        if not self.proc:
            raise Exception("Server not started")

        request = {"jsonrpc": "2.0", "method": method, "params": params, "id": self.next_id}
        self.next_id += 1
        print(f"📤 Sending: {method}")

        self.proc.stdin.write(json.dumps(request) + '\n')
        self.proc.stdin.flush()

        response = self.proc.stdout.readline()
        if not response:
            stderr_output = self.proc.stderr.read()
            if stderr_output:
                print(f"❌ Server error: {stderr_output}")
            raise Exception("No response from server")

        return json.loads(response)

    def call_tool(self, name: str, arguments: Dict[str, Any]) -> Dict[str, Any]:
        """Call a tool and decode the JSON text of its first content item."""
        start_time = time.time()
        response = self.send_request("tools/call", {"name": name, "arguments": arguments})
        elapsed = int((time.time() - start_time) * 1000)
        content = response.get('result', {}).get('content', [])
        if not content:
            print(f"   ❌ Unexpected response format: {response}")
            return {}
        result = json.loads(content[0].get('text', '{}'))
        print(f"   ⏱️  Time: {elapsed}ms")
        return result

    def initialize_connection(self):
        """Initialize MCP connection."""
        print("\n🔗 Initializing MCP connection...")

        init_response = self.send_request("initialize", {
            "protocolVersion": "2024-11-05",
            "capabilities": {"roots": {"listChanged": False}, "sampling": {}},
            "clientInfo": {"name": "esmin-test-client", "version": "1.0.0"},
        })
        print(f"✅ Initialize response: {init_response.get('result', {}).get('serverInfo', {}).get('name', 'Unknown')}")

        initialized_notification = {
            "jsonrpc": "2.0",
            "method": "notifications/initialized",
            "params": {}
        }
        self.proc.stdin.write(json.dumps(initialized_notification) + '\n')
        self.proc.stdin.flush()
        print("✅ Sent initialized notification")

    def list_tools(self):
        """List available tools."""
        print("\n🛠️ Listing available tools...")

        tools_response = self.send_request("tools/list", {})
        tools = tools_response.get('result', {}).get('tools', [])

        print(f"✅ Found {len(tools)} tools:")
        for tool in tools:
            print(f"   - {tool['name']}: {tool.get('description', 'No description')[:80]}")

        return tools

    def fixture(self, name: str) -> str:
        return self.call_tool("get_fixture", {"name": name}).get("text", "")

    def test_folding_check(self):
        """f02 folds P0 onto P2; f01 is a morphism but not a folding."""
        print("\n🧪 Test 1: Folding checks on the P0 fixtures")

        p0, p1, p2 = self.fixture("p0"), self.fixture("p1"), self.fixture("p2")
        f02 = self.call_tool("check_map", {
            "source_text": p0, "target_text": p2,
            "map_text": self.fixture("f02.map"), "criterion": "folding",
        })
        f01 = self.call_tool("check_map", {
            "source_text": p0, "target_text": p1,
            "map_text": self.fixture("f01.map"), "criterion": "folding",
        })
        print(f"   {'✅' if f02.get('verdict') else '❌'} f02 folding: {f02.get('verdict')}")
        print(f"   {'✅' if not f01.get('verdict') else '❌'} f01 folding: {f01.get('verdict')}")
        return {"f02": f02.get("verdict", False), "f01": f01.get("verdict", True)}

    def test_bisimilarity(self):
        """P0 and P1 are hhp-bisimilar."""
        print("\n🧪 Test 2: Hereditary history preserving bisimilarity")

        result = self.call_tool("decide_bisimilarity", {
            "left_text": self.fixture("p0"), "right_text": self.fixture("p1"),
        })
        print(f"   🎯 Bisimilar: {result.get('bisimilar')} ({result.get('triple_count')} triples)")
        return {"bisimilar": result.get("bisimilar", False)}

    def test_minimize(self):
        """The split AES has two incomparable minimal quotients."""
        print("\n🧪 Test 3: Minimisation in the AES class")

        result = self.call_tool("minimize_structure", {"text": self.fixture("split_a0"), "cls": "aes"})
        quotients = result.get("quotients", [])
        for q in quotients:
            print(f"   📦 {q.get('classes')}")
        print(f"   📊 {len(quotients)} maxima, unique: {result.get('unique')}")
        return {"maxima": len(quotients)}

    def run_tests(self):
        """Run all tests."""
        print("🔬 esmin MCP Server Tests (stdio transport)")
        print("=" * 70)

        try:
            self.start_server()
            self.initialize_connection()
            self.list_tools()

            folding = self.test_folding_check()
            bisim = self.test_bisimilarity()
            minimal = self.test_minimize()

            print("\n📊 TEST RESULTS SUMMARY")
            print("=" * 70)
            ok = (
                folding["f02"] and not folding["f01"]
                and bisim["bisimilar"]
                and minimal["maxima"] == 2
            )
            print(f"✅ f02 folding / f01 not: {folding['f02']} / {not folding['f01']}")
            print(f"✅ P0 ~hhp P1: {bisim['bisimilar']}")
            print(f"✅ AES maxima of split_a0: {minimal['maxima']}")
            print(f"\n🎯 FINAL ASSESSMENT: {'✅ SUCCESS' if ok else '❌ FAILURE'}")

        except Exception as e:
            print(f"❌ Test failed: {e}")
            import traceback
            traceback.print_exc()

        finally:
            if self.proc:
                self.proc.terminate()
                self.proc.wait()


def main():
    """Main entry point."""
    tester = EsminMCPStdioTester()
    tester.run_tests()


if __name__ == "__main__":
    main()
