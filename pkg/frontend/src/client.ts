// Thin typed wrapper over the prediction service's JSON endpoints.

export interface Candidate {
  display_text: string;
  logprob: number;
  truncated: boolean;
}

export interface PredictResponse {
  model_id: string;
  candidates: Candidate[];
  latency_ms: number;
}

export interface ModelInfo {
  model_id: string;
  context_window: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class PredictionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async predict(context: string, n: number, modelId?: string): Promise<PredictResponse> {
    const body: Record<string, unknown> = { context, n };
    if (modelId !== undefined) {
      body.model_id = modelId;
    }
    const resp = await this.fetchFn(`${this.baseUrl}/v1/predict`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      const detail = await resp.text();
      throw new Error(`predict failed (${resp.status}): ${detail}`);
    }
    return (await resp.json()) as PredictResponse;
  }

  async models(): Promise<ModelInfo[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/models`);
    if (!resp.ok) {
      throw new Error(`models failed (${resp.status})`);
    }
    const body = (await resp.json()) as { models: ModelInfo[] };
    return body.models;
  }
}
