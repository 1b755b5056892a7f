/** Shared fetch mock: records every request and serves canned JSON. */

export interface RecordedCall {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: unknown;
}

export type Responder = (url: string, init?: RequestInit) => { status: number; body: unknown } | undefined;

export function mockFetch(responder: Responder) {
  const calls: RecordedCall[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      headers: (init?.headers as Record<string, string>) ?? {},
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    const matched = responder(url, init) ?? { status: 404, body: { code: "not_found", message: "no stub" } };
    return new Response(JSON.stringify(matched.body), {
      status: matched.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, impl };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
