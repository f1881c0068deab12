// Thin fetch wrapper around the profile service.

import {
  ApiError,
  CompareGap,
  CompareResponse,
  LineupEntry,
  OfflineError,
  Profile,
  RosterEntry,
  ServedConfig,
} from "./types.js";

export interface ServiceClient {
  config(): Promise<ServedConfig>;
  players(role?: string, minMinutes?: number): Promise<RosterEntry[]>;
  profile(player: string, role: string): Promise<Profile>;
  compare(a: LineupEntry[], b: LineupEntry[]): Promise<CompareResponse>;
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(input, init);
  } catch (err) {
    throw new OfflineError(err);
  }
  if (!response.ok) {
    let message = `${response.status}`;
    let gaps: CompareGap[] = [];
    try {
      const body = (await response.json()) as { detail?: unknown };
      const detail = body.detail as
        | { message?: string; gaps?: CompareGap[] }
        | string
        | undefined;
      if (typeof detail === "string") {
        message = detail;
      } else if (detail) {
        message = detail.message ?? message;
        gaps = detail.gaps ?? [];
      }
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, message, gaps);
  }
  return (await response.json()) as T;
}

export class HttpServiceClient implements ServiceClient {
  constructor(private base: string = "") {}

  config(): Promise<ServedConfig> {
    return request<ServedConfig>(`${this.base}/config`);
  }

  players(role?: string, minMinutes = 0): Promise<RosterEntry[]> {
    const params = new URLSearchParams();
    if (role) params.set("role", role);
    if (minMinutes > 0) params.set("min_minutes", String(minMinutes));
    const qs = params.toString();
    return request<RosterEntry[]>(`${this.base}/players${qs ? `?${qs}` : ""}`);
  }

  profile(player: string, role: string): Promise<Profile> {
    const qs = new URLSearchParams({ role });
    return request<Profile>(
      `${this.base}/players/${encodeURIComponent(player)}/profile?${qs}`,
    );
  }

  compare(a: LineupEntry[], b: LineupEntry[]): Promise<CompareResponse> {
    return request<CompareResponse>(`${this.base}/lineups/compare`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ lineup_a: a, lineup_b: b }),
    });
  }
}
