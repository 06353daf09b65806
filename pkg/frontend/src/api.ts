/**
 * Thin client for the gridmixer HTTP service. At most one simulate request
 * is in flight: starting a new one aborts its predecessor, matching the
 * editor's newest-edit-wins policy.
 */

import { Design } from "./model.js";
import { SimulateResponse } from "./state.js";

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly issues: Array<{ severity: string; location: string; message: string }> = [],
  ) {
    super(message);
  }
}

export class SimulationClient {
  private controller: AbortController | null = null;

  constructor(readonly baseUrl: string) {}

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  /** POST the design with profile traces; aborts any in-flight simulate. */
  async simulate(design: Design): Promise<SimulateResponse> {
    this.controller?.abort();
    this.controller = new AbortController();
    const response = await fetch(`${this.baseUrl}/api/simulate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...design, includeProfiles: true }),
      signal: this.controller.signal,
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(body.error ?? "simulation failed", response.status, body.issues ?? []);
    }
    return body as SimulateResponse;
  }

  async generate(params: Record<string, unknown>): Promise<Design> {
    const response = await fetch(`${this.baseUrl}/api/generate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(body.error ?? "generation failed", response.status);
    }
    return body as Design;
  }
}
