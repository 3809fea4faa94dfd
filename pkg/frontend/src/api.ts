// Typed client for the pm3d service endpoints.  All calls go through
// fetch; non-2xx responses raise ApiError carrying the parsed payload so
// the UI can show config violations and parse errors inline.

import type {
  Backdrop,
  DetailCard,
  GenerateRequest,
  ModelSummary,
  ScenePayload,
  UploadResponse,
} from './types.js'

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: unknown,
    message: string,
  ) {
    super(message)
  }
}

function describe(payload: unknown, fallback: string): string {
  if (payload && typeof payload === 'object') {
    const p = payload as Record<string, unknown>
    if (typeof p.message === 'string') return p.message
    if (typeof p.error === 'string') return p.error
    if (Array.isArray(p.violations)) {
      return p.violations
        .map((v) => `[${(v as { rule: string }).rule}] ${(v as { message: string }).message}`)
        .join('; ')
    }
  }
  return fallback
}

async function reject(response: Response): Promise<never> {
  let payload: unknown = null
  try {
    payload = await response.json()
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, payload, describe(payload, response.statusText))
}

export function createApi(baseUrl = '') {
  const url = (path: string) => `${baseUrl}${path}`

  return {
    async uploadModel(xml: string): Promise<UploadResponse> {
      const response = await fetch(url('/models'), {
        method: 'POST',
        headers: { 'Content-Type': 'application/xml' },
        body: xml,
      })
      if (!response.ok) await reject(response)
      return response.json()
    },

    async getModel(modelId: string): Promise<{ model_id: string; summary: ModelSummary }> {
      const response = await fetch(url(`/models/${modelId}`))
      if (!response.ok) await reject(response)
      return response.json()
    },

    async computeScene(
      modelId: string,
      configText: string,
      backdrop: Backdrop = 'none',
    ): Promise<ScenePayload> {
      const query = backdrop === 'none' ? '' : `?backdrop=${backdrop}`
      const response = await fetch(url(`/models/${modelId}/scene${query}`), {
        method: 'POST',
        headers: { 'Content-Type': 'text/plain' },
        body: configText,
      })
      if (!response.ok) await reject(response)
      return response.json()
    },

    async getNodeDetails(modelId: string, nodeId: string): Promise<DetailCard> {
      const response = await fetch(url(`/models/${modelId}/nodes/${nodeId}`))
      if (!response.ok) await reject(response)
      return response.json()
    },

    async generateModel(spec: GenerateRequest): Promise<{ model_id: string; summary: ModelSummary }> {
      const response = await fetch(url('/generate'), {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(spec),
      })
      if (!response.ok) await reject(response)
      return response.json()
    },
  }
}

export type Api = ReturnType<typeof createApi>

/**
 * Wrap an async producer so only the most recently started call resolves;
 * earlier in-flight results are discarded (last-submitted config wins).
 */
export function latestWins<A extends unknown[], R>(
  run: (...args: A) => Promise<R>,
): (...args: A) => Promise<R | undefined> {
  let ticket = 0
  return async (...args: A) => {
    const mine = ++ticket
    const result = await run(...args)
    return mine === ticket ? result : undefined
  }
}
