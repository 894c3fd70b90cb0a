import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { ElicitationWizard } from "../src/wizard.js";
import fixtures from "./fixtures.json";

function clientReturning(json: object, status = 200): ApiClient {
  const fetchFn = vi.fn(async () =>
    new Response(JSON.stringify(json), { status, headers: { "Content-Type": "application/json" } }));
  const client = new ApiClient("http://test", fetchFn);
  return Object.assign(client, { fetchFn });
}

describe("elicitation wizard", () => {
  it("turns $122.65 into risk aversion 2.00", async () => {
    const client = clientReturning(fixtures.elicitBase);
    const wizard = new ElicitationWizard(client);
    const outcome = await wizard.submit(122.65);
    expect(outcome.kind).toBe("alpha");
    expect(outcome.alpha).toBeCloseTo(2.0, 3);
    expect(outcome.message).toContain("2.00");
  });

  it("sends the fixed $10,000 / 1% gamble to the API", async () => {
    const client = clientReturning(fixtures.elicitBase) as ApiClient & { fetchFn: ReturnType<typeof vi.fn> };
    await new ElicitationWizard(client).submit(122.65);
    const [url, init] = client.fetchFn.mock.calls[0];
    expect(url).toBe("http://test/v1/elicit");
    expect(JSON.parse(init.body)).toEqual({
      loss_dollars: 10_000,
      probability: 0.01,
      willingness_to_pay_dollars: 122.65,
    });
  });

  it("answering the expected loss means risk neutral, no request", async () => {
    const client = clientReturning({}) as ApiClient & { fetchFn: ReturnType<typeof vi.fn> };
    const outcome = await new ElicitationWizard(client).submit(100);
    expect(outcome.kind).toBe("risk_neutral");
    expect(outcome.message).toContain("expected loss");
    expect(client.fetchFn).not.toHaveBeenCalled();
  });

  it("rejects answers at or above the full loss with the valid range", async () => {
    const client = clientReturning({}) as ApiClient & { fetchFn: ReturnType<typeof vi.fn> };
    const outcome = await new ElicitationWizard(client).submit(15_000);
    expect(outcome.kind).toBe("invalid");
    expect(outcome.message).toContain("$10,000");
    expect(client.fetchFn).not.toHaveBeenCalled();
  });

  it("relays the API's explanation on a 422", async () => {
    const client = clientReturning(
      { schema: "v1", error: "willingness to pay must lie strictly between the expected loss ($100.00) and the full loss ($10,000.00)" },
      422);
    const outcome = await new ElicitationWizard(client).submit(101);
    expect(outcome.kind).toBe("invalid");
    expect(outcome.message).toContain("$100.00");
  });
});
